"""Builders shared by the test modules."""

import numpy as np

from alopt.data import GeneratorConfig, Instance, Provenance, generate_masses, split_sizes
from alopt.types import AircraftSpec, Container, Payload, ShearLimit


def small_aircraft(bin_count: int = 4, **overrides: object) -> AircraftSpec:
    """Sample aircraft with a CG window wide enough to rarely bind."""
    fields: dict[str, object] = {
        "bin_count": bin_count,
        "max_payload": 40000,
        "empty_mass": 120000,
        "empty_cg": -0.05,
        "cg_min": -0.5,
        "cg_max": 0.5,
        "cg_target": 0.1,
        "shear_limit": ShearLimit(peak=22000),
    }
    fields.update(overrides)
    return AircraftSpec(**fields)  # type: ignore[arg-type]


def payload_of(*rows: tuple[int, int, int]) -> Payload:
    """Payload from (id, size, mass) triplets."""
    return Payload(tuple(Container(k, s, m) for k, s, m in rows))  # type: ignore[arg-type]


def random_small_instance(seed: int, max_n: int = 6, max_bins: int = 4) -> Instance:
    """Generated masses on a small aircraft with a generous CG window."""
    rng = np.random.default_rng(seed)
    bin_count = int(rng.integers(2, max_bins + 1))
    n = int(rng.integers(1, max_n + 1))
    n1, n2, n3 = split_sizes(n)
    payload = generate_masses(GeneratorConfig(n1, n2, n3, bin_count, seed=seed))
    return Instance(small_aircraft(bin_count), payload, Provenance("file"))

"""Instance bundle: aircraft, payload and where they came from."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from alopt.data.generator import GeneratorConfig, generate_masses, split_sizes
from alopt.data.reference import reference_aircraft, reference_payload
from alopt.exceptions import SpecError
from alopt.types import AircraftSpec, Payload

ProvenanceKind = Literal["generated", "reference", "file"]


@dataclass(frozen=True)
class Provenance:
    """Origin of an instance; ``generated`` keeps the seed and generator config."""

    kind: ProvenanceKind
    seed: int | None = None
    config: GeneratorConfig | None = None
    path: str | None = None

    def __post_init__(self) -> None:
        if self.kind == "generated" and (self.seed is None or self.config is None):
            raise SpecError("provenance", "generated instances need a seed and a config")


@dataclass(frozen=True)
class Instance:
    """A loading problem: aircraft plus available payload."""

    spec: AircraftSpec
    payload: Payload
    provenance: Provenance = Provenance("file")

    @property
    def w_max_cap(self) -> int:
        """min(W_p, sum of masses)."""
        return min(self.spec.max_payload, self.payload.total_mass)


def airbus_reference_instance() -> Instance:
    """The 30-container, 20-bin sample data set."""
    return Instance(reference_aircraft(), reference_payload(), Provenance("reference"))


def generate_instance(config: GeneratorConfig, *, aircraft: AircraftSpec | None = None) -> Instance:
    """Generate a payload and pair it with the sample aircraft at ``config.bin_count`` bins."""
    spec = aircraft if aircraft is not None else reference_aircraft(config.bin_count)
    if spec.bin_count != config.bin_count:
        raise SpecError("bin_count", f"aircraft has {spec.bin_count} bins, config {config.bin_count}")
    payload = generate_masses(config)
    return Instance(spec, payload, Provenance("generated", seed=config.seed, config=config))


def generate_sized_instance(n: int, bin_count: int, seed: int | None = None) -> Instance:
    """Generate an instance with the default n/2, n/3, n/6 size split."""
    n1, n2, n3 = split_sizes(n)
    return generate_instance(GeneratorConfig(n1, n2, n3, bin_count, seed=seed))

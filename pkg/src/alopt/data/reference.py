"""The published Airbus sample data set."""

from __future__ import annotations

from alopt.types import AircraftSpec, Container, Payload, ShearLimit

REFERENCE_BIN_COUNT = 20
REFERENCE_MAX_PAYLOAD = 40000
REFERENCE_EMPTY_MASS = 120000
REFERENCE_EMPTY_CG = -0.05
REFERENCE_CG_MIN = -0.1
REFERENCE_CG_MAX = 0.2
REFERENCE_CG_TARGET = 0.1
REFERENCE_SHEAR_PEAK = 22000

# (k, size, mass kg)
REFERENCE_CONTAINERS: tuple[tuple[int, int, int], ...] = (
    (1, 1, 2134),
    (2, 1, 3455),
    (3, 1, 1866),
    (4, 1, 1699),
    (5, 1, 3500),
    (6, 1, 3332),
    (7, 1, 2578),
    (8, 1, 2315),
    (9, 1, 1888),
    (10, 1, 1786),
    (11, 1, 3277),
    (12, 1, 2987),
    (13, 1, 2534),
    (14, 1, 2111),
    (15, 1, 2607),
    (16, 1, 1566),
    (17, 1, 1765),
    (18, 1, 1946),
    (19, 1, 1732),
    (20, 1, 1641),
    (21, 2, 1800),
    (22, 2, 986),
    (23, 2, 873),
    (24, 2, 1764),
    (25, 2, 1239),
    (26, 2, 1487),
    (27, 2, 769),
    (28, 2, 836),
    (29, 2, 659),
    (30, 2, 765),
)


def reference_aircraft(bin_count: int = REFERENCE_BIN_COUNT) -> AircraftSpec:
    """Sample-set aircraft, optionally with a different bin count."""
    return AircraftSpec(
        bin_count=bin_count,
        max_payload=REFERENCE_MAX_PAYLOAD,
        empty_mass=REFERENCE_EMPTY_MASS,
        empty_cg=REFERENCE_EMPTY_CG,
        cg_min=REFERENCE_CG_MIN,
        cg_max=REFERENCE_CG_MAX,
        cg_target=REFERENCE_CG_TARGET,
        shear_limit=ShearLimit(peak=REFERENCE_SHEAR_PEAK, shape="linear"),
    )


def reference_payload() -> Payload:
    return Payload(tuple(Container(k, s, m) for k, s, m in REFERENCE_CONTAINERS))  # type: ignore[arg-type]

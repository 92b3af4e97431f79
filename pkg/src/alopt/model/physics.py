"""Loading physics: carried mass, center of gravity and shear at bin centers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from alopt.exceptions import DimensionError
from alopt.model.geometry import bin_domain, signed_distance
from alopt.types import AircraftSpec, Assignment, Container, Payload, ShearSide, to_fraction


@dataclass(frozen=True, slots=True)
class ShearPoint:
    """Cumulative load from one end up to bin j, with its limit."""

    j: int
    side: ShearSide
    load: Fraction
    limit: Fraction

    @property
    def within_limit(self) -> bool:
        return self.load <= self.limit


def placed_containers(
    assignment: Assignment, spec: AircraftSpec, payload: Payload
) -> list[tuple[Container, int]]:
    """Resolve (k, j) pairs to containers, checking ids and bin domains.

    Raises:
        DimensionError: If a pair names an unknown container or an invalid bin
    """
    resolved: list[tuple[Container, int]] = []
    for k, j in assignment.sorted_pairs():
        container = payload.by_id.get(k)
        if container is None:
            raise DimensionError(f"Container {k} is not part of the payload")
        if j not in bin_domain(container.size, spec.bin_count):
            raise DimensionError(
                f"Bin {j} is outside the domain of container {k} (size {container.size})"
            )
        resolved.append((container, j))
    return resolved


def total_mass(assignment: Assignment, payload: Payload) -> int:
    """Carried freight mass in kg."""
    total = 0
    for k, _ in assignment.pairs:
        container = payload.by_id.get(k)
        if container is None:
            raise DimensionError(f"Container {k} is not part of the payload")
        total += container.mass
    return total


def center_of_gravity(assignment: Assignment, spec: AircraftSpec, payload: Payload) -> Fraction:
    """Center of gravity of the loaded aircraft, as an exact fraction of L."""
    moment = spec.empty_mass * to_fraction(spec.empty_cg)
    mass = Fraction(spec.empty_mass)
    for container, j in placed_containers(assignment, spec, payload):
        moment += container.mass * signed_distance(container.size, j, spec.bin_count)
        mass += container.mass
    return moment / mass


def cg_deviation(assignment: Assignment, spec: AircraftSpec, payload: Payload) -> Fraction:
    """Distance |x_cg - x_target| of the loaded aircraft."""
    cg = center_of_gravity(assignment, spec, payload)
    target = to_fraction(spec.cg_target)
    return cg - target if cg >= target else target - cg


def _shear_load(placed: list[tuple[Container, int]], j: int, side: ShearSide, n_bins: int) -> Fraction:
    load = Fraction(0)
    for container, p in placed:
        if side == "left":
            if container.size == 3:
                if p < j:
                    load += container.mass
                elif p == j:
                    load += Fraction(container.mass, 2)
            elif p <= j:
                load += container.mass
        elif container.size == 3:
            if p > n_bins - j:
                load += container.mass
            elif p == n_bins - j:
                load += Fraction(container.mass, 2)
        elif p > n_bins - j:
            load += container.mass
    return load


def shear_profile(
    assignment: Assignment, spec: AircraftSpec, payload: Payload
) -> list[ShearPoint]:
    """Left then right shear samples for j = 1..floor(N/2)."""
    placed = placed_containers(assignment, spec, payload)
    points: list[ShearPoint] = []
    sides: tuple[ShearSide, ...] = ("left", "right")
    for side in sides:
        for j in range(1, spec.half_bins + 1):
            points.append(
                ShearPoint(
                    j=j,
                    side=side,
                    load=_shear_load(placed, j, side, spec.bin_count),
                    limit=spec.shear_rhs(j, side),
                )
            )
    return points

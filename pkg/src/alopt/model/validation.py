"""Exact feasibility checks for assignments."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from alopt.model.constraints import ConstraintSystem, Violation, build_constraints
from alopt.model.physics import placed_containers
from alopt.types import AircraftSpec, Assignment, Payload


@dataclass(frozen=True, slots=True)
class ValidationReport:
    """Outcome of checking an assignment against every row of a system.

    ``objective`` is the system objective at the checked vector; for the mass
    objective it is minus the carried mass.
    """

    violations: tuple[Violation, ...] = ()
    objective: int = 0

    @property
    def feasible(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.feasible:
            return "feasible"
        parts = [f"{v.tag}[{v.index}] lhs={float(v.lhs):.6g} rhs={float(v.rhs):.6g}" for v in self.violations]
        return f"{len(parts)} violated: " + "; ".join(parts)


def validate(
    assignment: Assignment,
    spec: AircraftSpec,
    payload: Payload,
    *,
    system: ConstraintSystem | None = None,
) -> ValidationReport:
    """Check an assignment row by row with exact arithmetic.

    Args:
        assignment: Placement pairs to check
        spec: Aircraft parameters
        payload: Available containers
        system: Prebuilt system (with any extra rows); built from spec and payload if omitted

    Raises:
        DimensionError: If the assignment names unknown containers or invalid bins
    """
    placed_containers(assignment, spec, payload)
    if system is None:
        system = build_constraints(spec, payload)
    x = system.variables.to_vector(assignment)
    return ValidationReport(violations=tuple(system.violations(x)), objective=system.objective_value(x))


@dataclass(frozen=True, slots=True)
class PackingResult:
    """Result of physically packing an assignment into half-bin slots."""

    overfull_bins: tuple[int, ...] = ()
    repeated_containers: tuple[int, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.overfull_bins and not self.repeated_containers


def simulate_packing(assignment: Assignment, spec: AircraftSpec, payload: Payload) -> PackingResult:
    """Load containers into the bins one at a time and record any collision.

    Each bin has two half-width slots. A size-1 container needs both slots of
    its bin, a size-2 container needs one, and a size-3 container needs both
    slots of bins j and j+1.
    """
    free = [2] * (spec.bin_count + 1)
    overfull: set[int] = set()
    counts = Counter(k for k, _ in assignment.pairs)
    for container, j in placed_containers(assignment, spec, payload):
        if container.size == 1:
            demand = {j: 2}
        elif container.size == 2:
            demand = {j: 1}
        else:
            demand = {j: 2, j + 1: 2}
        for bin_index, slots in demand.items():
            if free[bin_index] < slots:
                overfull.add(bin_index)
            free[bin_index] -= slots
    return PackingResult(
        overfull_bins=tuple(sorted(overfull)),
        repeated_containers=tuple(sorted(k for k, c in counts.items() if c > 1)),
    )

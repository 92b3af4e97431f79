"""Brute-force oracle over every placement assignment."""

from __future__ import annotations

import logging
import math
import time

from alopt.exceptions import SearchSpaceError
from alopt.model.constraints import ConstraintSystem, count_nonzeros
from alopt.solver.search import DepthFirstSearch, check_alignment, columns_mass
from alopt.solver.types import SolveConfig, SolveReport, TracePoint
from alopt.types import AircraftSpec, Assignment, Payload, SolveStatus

logger = logging.getLogger(__name__)


def search_space_size(system: ConstraintSystem) -> int:
    """Number of assignments with each container in one bin or left out."""
    variables = system.variables
    return math.prod(len(variables.block(c.id)) + 1 for c in variables.containers)


def solve_exhaustive(
    system: ConstraintSystem,
    payload: Payload,
    spec: AircraftSpec,
    config: SolveConfig | None = None,
) -> SolveReport:
    """Enumerate all assignments and return a true optimum.

    Only prefixes that already violate a row with non-negative coefficients
    are cut; every other row is checked on complete assignments.

    Raises:
        SearchSpaceError: If the enumeration would exceed the guard
    """
    config = config or SolveConfig(mode="exhaustive")
    check_alignment(system, set(payload.by_id))
    estimate = search_space_size(system)
    if estimate > config.exhaustive_limit:
        raise SearchSpaceError(estimate, config.exhaustive_limit)

    start = time.perf_counter()
    engine = DepthFirstSearch(
        system,
        [c.id for c in system.variables.containers],
        prune_with_bounds=False,
        first_feasible=system.is_null_objective,
    )
    result = engine.run()
    wall = time.perf_counter() - start

    status: SolveStatus
    incumbent = None
    trace: list[TracePoint] = []
    if result.best_value is None:
        status = "infeasible_proven"
    else:
        status = "optimal"
        incumbent = Assignment.from_pairs(system.variables.pair(c) for c in result.best_columns)
        masses: list[int] = []
        for t, _, columns in result.trace:
            mass = columns_mass(system, columns)
            if not masses or mass > masses[-1]:
                masses.append(mass)
                trace.append(TracePoint(t, mass))
    logger.info("Exhaustive search: %s after %d nodes in %.3fs", status, result.nodes, wall)
    return SolveReport(
        status=status,
        incumbent=incumbent,
        trace=tuple(trace),
        n_l=count_nonzeros(system),
        wall_time=wall,
        mode="exhaustive",
        iterations=result.nodes,
    )

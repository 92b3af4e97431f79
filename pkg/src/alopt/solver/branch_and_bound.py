"""Depth-first branch-and-bound for the mass objective."""

from __future__ import annotations

import logging
import time

from alopt.model.constraints import ConstraintSystem, count_nonzeros
from alopt.solver.search import DepthFirstSearch, NodeHook, check_alignment, columns_mass
from alopt.solver.types import SolveConfig, SolveReport, TracePoint, mass_target
from alopt.types import AircraftSpec, Assignment, Payload, SolveStatus

logger = logging.getLogger(__name__)


def solve_branch_and_bound(
    system: ConstraintSystem,
    payload: Payload,
    spec: AircraftSpec,
    config: SolveConfig | None = None,
    *,
    node_hook: NodeHook | None = None,
) -> SolveReport:
    """Anytime exact search, heaviest containers first.

    The bound at a node is the current mass plus the smallest of the
    remaining mass, the residual weight capacity and, for even N, the
    residual shear capacity of the two central shear rows. The search stops
    early once the mass reaches tau * W^max.
    """
    config = config or SolveConfig()
    check_alignment(system, set(payload.by_id))
    order = [
        c.id for c in sorted(system.variables.containers, key=lambda c: (-c.mass, c.id))
    ]
    target = mass_target(config.tau, config.reference(spec, payload))
    start = time.perf_counter()
    engine = DepthFirstSearch(
        system,
        order,
        prune_with_bounds=True,
        deadline=start + config.time_budget,
        stop_value=target,
        first_feasible=system.is_null_objective,
        node_hook=node_hook,
    )
    result = engine.run()
    wall = time.perf_counter() - start

    status: SolveStatus
    incumbent = None
    trace: list[TracePoint] = []
    if result.best_value is None:
        status = "infeasible_proven" if result.complete else "no_solution_found"
    else:
        incumbent = Assignment.from_pairs(system.variables.pair(c) for c in result.best_columns)
        for t, _, columns in result.trace:
            mass = columns_mass(system, columns)
            if not trace or mass > trace[-1].mass:
                trace.append(TracePoint(t, mass))
        if result.complete or system.is_null_objective or result.best_value >= engine.root_bound:
            status = "optimal"
        elif result.best_value >= target:
            status = "tau_reached"
        else:
            status = "budget_exhausted"
    logger.info(
        "Branch-and-bound: %s, mass %s after %d nodes in %.3fs",
        status,
        trace[-1].mass if trace else None,
        result.nodes,
        wall,
    )
    return SolveReport(
        status=status,
        incumbent=incumbent,
        trace=tuple(trace),
        n_l=count_nonzeros(system),
        wall_time=wall,
        mode="branch_and_bound",
        iterations=result.nodes,
    )

"""Exact and heuristic solvers for the loading problem.

Example:
    ```python
    from alopt.data import airbus_reference_instance
    from alopt.model import build_constraints
    from alopt.solver import SolveConfig, solve

    instance = airbus_reference_instance()
    system = build_constraints(instance.spec, instance.payload)
    config = SolveConfig(mode="threshold_descent", tau=0.99, time_budget=120)
    report = solve(system, instance.payload, instance.spec, config)
    ```
"""

from alopt.model.constraints import ConstraintSystem
from alopt.solver.branch_and_bound import solve_branch_and_bound
from alopt.solver.exhaustive import search_space_size, solve_exhaustive
from alopt.solver.search import SearchNode
from alopt.solver.threshold import solve_threshold_descent
from alopt.solver.types import SolveConfig, SolveReport, TracePoint, mass_target, w_max
from alopt.types import AircraftSpec, Payload


def solve(
    system: ConstraintSystem,
    payload: Payload,
    spec: AircraftSpec,
    config: SolveConfig | None = None,
) -> SolveReport:
    """Run the solver selected by ``config.mode``."""
    config = config or SolveConfig()
    if config.mode == "exhaustive":
        return solve_exhaustive(system, payload, spec, config)
    if config.mode == "branch_and_bound":
        return solve_branch_and_bound(system, payload, spec, config)
    return solve_threshold_descent(system, payload, spec, config)


__all__ = [
    "SearchNode",
    "SolveConfig",
    "SolveReport",
    "TracePoint",
    "mass_target",
    "search_space_size",
    "solve",
    "solve_branch_and_bound",
    "solve_exhaustive",
    "solve_threshold_descent",
    "w_max",
]

"""Center-of-gravity optimization at (near) maximum carried mass."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Literal

from alopt.cgopt.rows import mass_floor_row, remap_cg_objective
from alopt.data.instance import Instance
from alopt.exceptions import SpecError
from alopt.model.constraints import ConstraintSystem, build_constraints
from alopt.model.physics import center_of_gravity, cg_deviation, total_mass
from alopt.solver import SolveConfig, SolveReport, solve, w_max
from alopt.types import Assignment, to_fraction

logger = logging.getLogger(__name__)

CgMethod = Literal["sequence", "direct"]
CgStatus = Literal["target_hit", "converged", "stalled", "max_stages", "no_solution_found"]
WMaxMode = Literal["solve", "cap"]


@dataclass(frozen=True)
class CgOptConfig:
    """Settings for the center-of-gravity stages.

    ``w_max_mode="solve"`` takes W^max as the mass found by a first mass
    solve; ``"cap"`` uses min(W_p, sum m). ``initial_bound`` seeds the
    direct method's distance threshold (default 1, which admits every
    loading).
    """

    DEFAULT_TAU = 0.998
    DEFAULT_EPSILON = 0.001
    DEFAULT_MAX_STAGES = 50

    tau: float = DEFAULT_TAU
    epsilon: float = DEFAULT_EPSILON
    max_stages: int = DEFAULT_MAX_STAGES
    method: CgMethod = "sequence"
    w_max_mode: WMaxMode = "solve"
    stage_budget: float | None = None
    initial_bound: float | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.tau <= 1:
            raise SpecError("tau", f"must lie in [0, 1], got {self.tau}")
        if self.epsilon <= 0:
            raise SpecError("epsilon", f"must be positive, got {self.epsilon}")
        if self.max_stages < 1:
            raise SpecError("max_stages", f"must be >= 1, got {self.max_stages}")
        if self.method not in ("sequence", "direct"):
            raise SpecError("method", f"unknown method {self.method!r}")
        if self.w_max_mode not in ("solve", "cap"):
            raise SpecError("w_max_mode", f"unknown mode {self.w_max_mode!r}")
        if self.initial_bound is not None and self.initial_bound < 0:
            raise SpecError("initial_bound", f"must be >= 0, got {self.initial_bound}")


@dataclass(frozen=True, slots=True)
class CgStage:
    """One feasibility solve: the window (sequence) or distance bound (direct) it ran with."""

    index: int
    feasible: bool
    solver_status: str
    window: tuple[Fraction, Fraction] | None = None
    bound: Fraction | None = None
    cg: Fraction | None = None
    deviation: Fraction | None = None
    mass: int | None = None


@dataclass(frozen=True)
class CgOptReport:
    status: CgStatus
    method: CgMethod
    assignment: Assignment | None
    deviation: Fraction | None
    cg: Fraction | None
    mass: int
    w_max: int
    stages: tuple[CgStage, ...]

    @property
    def feasible_stages(self) -> tuple[CgStage, ...]:
        return tuple(s for s in self.stages if s.feasible)


def resolve_w_max(instance: Instance, config: CgOptConfig, solve_config: SolveConfig) -> int:
    """W^max for the mass floor: solved mass or the min(W_p, sum m) cap."""
    cap = w_max(instance.spec, instance.payload)
    if config.w_max_mode == "cap":
        return cap
    system = build_constraints(instance.spec, instance.payload)
    report = solve(system, instance.payload, instance.spec, solve_config)
    if report.incumbent is None:
        logger.warning("Mass solve found no loading; falling back to the cap %d", cap)
        return cap
    logger.info("W^max from %s mass solve: %d (%s)", solve_config.mode, report.mass, report.status)
    return report.mass


def _stage_config(config: CgOptConfig, solve_config: SolveConfig) -> SolveConfig:
    if config.stage_budget is None:
        return solve_config
    return replace(solve_config, time_budget=config.stage_budget)


def _feasibility(
    system: ConstraintSystem, instance: Instance, solve_config: SolveConfig
) -> tuple[SolveReport, Assignment | None]:
    report = solve(system.with_objective(None), instance.payload, instance.spec, solve_config)
    return report, report.incumbent


def optimize_cg_sequence(
    instance: Instance,
    config: CgOptConfig | None = None,
    solve_config: SolveConfig | None = None,
) -> CgOptReport:
    """Shrink the CG window around the target through a sequence of feasibility solves.

    Each stage solves the full system for the current window plus the mass
    floor, with a null objective. After a feasible stage at x_cg the window
    end on the side of x_cg moves to x_cg +/- epsilon and the opposite end is
    clipped to the mirror image of x_cg (less epsilon), so the achieved
    deviation strictly decreases from stage to stage.
    """
    config = config or CgOptConfig(method="sequence")
    solve_config = solve_config or SolveConfig()
    spec, payload = instance.spec, instance.payload
    reference = resolve_w_max(instance, config, solve_config)
    floor = mass_floor_row(spec, payload, config.tau, reference)
    stage_config = _stage_config(config, solve_config)
    eps = to_fraction(config.epsilon)
    target = to_fraction(spec.cg_target)
    lo, hi = to_fraction(spec.cg_min), to_fraction(spec.cg_max)

    stages: list[CgStage] = []
    best: Assignment | None = None
    status: CgStatus = "max_stages"
    for index in range(config.max_stages):
        system = build_constraints(spec, payload, cg_window=(lo, hi)).with_rows([floor])
        report, assignment = _feasibility(system, instance, stage_config)
        if assignment is None:
            stages.append(CgStage(index, False, report.status, window=(lo, hi)))
            logger.info("Stage %d: window [%s, %s] infeasible (%s)", index, float(lo), float(hi), report.status)
            if best is None:
                status = "no_solution_found"
            else:
                status = "converged" if report.status == "infeasible_proven" else "stalled"
            break
        cg = center_of_gravity(assignment, spec, payload)
        deviation = cg_deviation(assignment, spec, payload)
        stages.append(
            CgStage(
                index,
                True,
                report.status,
                window=(lo, hi),
                cg=cg,
                deviation=deviation,
                mass=total_mass(assignment, payload),
            )
        )
        logger.info(
            "Stage %d: window [%.6f, %.6f] feasible, x_cg=%.6f, deviation=%.6f",
            index,
            float(lo),
            float(hi),
            float(cg),
            float(deviation),
        )
        best = assignment
        if deviation == 0:
            status = "target_hit"
            break
        if cg < target:
            lo = cg + eps
            hi = min(hi, target + deviation - eps)
        else:
            hi = cg - eps
            lo = max(lo, target - deviation + eps)
        if lo > hi:
            status = "converged"
            break

    return _report(instance, config, "sequence", status, best, reference, stages)


def optimize_cg_direct(
    instance: Instance,
    config: CgOptConfig | None = None,
    solve_config: SolveConfig | None = None,
) -> CgOptReport:
    """Descend on the distance bound b of the remapped CG objective.

    The aircraft window rows are replaced by the two remap rows at b, so
    the window is bounded only by the distance to the target. After a
    feasible stage with deviation D the bound becomes D - epsilon. An
    infeasible first stage widens b by doubling (starting from epsilon)
    until a loading is found or b reaches 1.
    """
    config = config or CgOptConfig(method="direct")
    solve_config = solve_config or SolveConfig()
    spec, payload = instance.spec, instance.payload
    reference = resolve_w_max(instance, config, solve_config)
    floor = mass_floor_row(spec, payload, config.tau, reference)
    stage_config = _stage_config(config, solve_config)
    eps = to_fraction(config.epsilon)
    base = build_constraints(spec, payload).without_tags("cg_upper", "cg_lower").with_rows([floor])
    bound = to_fraction(config.initial_bound) if config.initial_bound is not None else Fraction(1)

    stages: list[CgStage] = []
    best: Assignment | None = None
    status: CgStatus = "max_stages"
    for index in range(config.max_stages):
        system = base.with_rows(remap_cg_objective(spec, payload, bound))
        report, assignment = _feasibility(system, instance, stage_config)
        if assignment is None:
            stages.append(CgStage(index, False, report.status, bound=bound))
            logger.info("Stage %d: bound %.6f infeasible (%s)", index, float(bound), report.status)
            if best is None:
                if bound >= 1:
                    status = "no_solution_found"
                    break
                bound = min(Fraction(1), max(eps, 2 * bound))
                continue
            status = "converged" if report.status == "infeasible_proven" else "stalled"
            break
        cg = center_of_gravity(assignment, spec, payload)
        deviation = cg_deviation(assignment, spec, payload)
        stages.append(
            CgStage(
                index,
                True,
                report.status,
                bound=bound,
                cg=cg,
                deviation=deviation,
                mass=total_mass(assignment, payload),
            )
        )
        logger.info(
            "Stage %d: bound %.6f feasible, x_cg=%.6f, deviation=%.6f",
            index,
            float(bound),
            float(cg),
            float(deviation),
        )
        best = assignment
        if deviation == 0:
            status = "target_hit"
            break
        bound = deviation - eps
        if bound < 0:
            status = "converged"
            break

    return _report(instance, config, "direct", status, best, reference, stages)


def optimize_cg(
    instance: Instance,
    config: CgOptConfig | None = None,
    solve_config: SolveConfig | None = None,
) -> CgOptReport:
    config = config or CgOptConfig()
    if config.method == "direct":
        return optimize_cg_direct(instance, config, solve_config)
    return optimize_cg_sequence(instance, config, solve_config)


def _report(
    instance: Instance,
    config: CgOptConfig,
    method: CgMethod,
    status: CgStatus,
    best: Assignment | None,
    reference: int,
    stages: list[CgStage],
) -> CgOptReport:
    if best is None:
        return CgOptReport(status, method, None, None, None, 0, reference, tuple(stages))
    spec, payload = instance.spec, instance.payload
    return CgOptReport(
        status=status,
        method=method,
        assignment=best,
        deviation=cg_deviation(best, spec, payload),
        cg=center_of_gravity(best, spec, payload),
        mass=total_mass(best, payload),
        w_max=reference,
        stages=tuple(stages),
    )

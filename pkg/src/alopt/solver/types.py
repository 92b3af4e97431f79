"""Solver configuration and reports."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from alopt.exceptions import SpecError
from alopt.settings import resolve_seed, resolve_threads
from alopt.types import AircraftSpec, Assignment, Payload, SolveMode, SolveStatus, to_fraction

InitialThreshold = Literal["open", "warm"]


def w_max(spec: AircraftSpec, payload: Payload) -> int:
    """Practical cap on carried mass, min(W_p, sum of masses)."""
    return min(spec.max_payload, payload.total_mass)


def mass_target(tau: float | Fraction, reference: int) -> Fraction:
    """Exact acceptance level tau * W^max."""
    return to_fraction(tau) * reference


@dataclass(frozen=True)
class SolveConfig:
    """Settings shared by all solver modes.

    ``seed`` and ``threads`` fall back to ALOPT_SEED and ALOPT_THREADS.
    ``reference_mass`` replaces min(W_p, sum m) as W^max when the exact
    optimum is known.
    """

    DEFAULT_TAU = 0.999
    DEFAULT_TIME_BUDGET = 60.0
    DEFAULT_RESTARTS = 8
    DEFAULT_THRESHOLD_STEP = 1
    DEFAULT_STALL_LIMIT = 4000
    DEFAULT_EXHAUSTIVE_LIMIT = 10**8

    mode: SolveMode = "branch_and_bound"
    tau: float = DEFAULT_TAU
    time_budget: float = DEFAULT_TIME_BUDGET
    seed: int | None = None
    restarts: int = DEFAULT_RESTARTS
    threshold_step: int = DEFAULT_THRESHOLD_STEP
    threads: int | None = None
    initial_threshold: InitialThreshold = "open"
    reference_mass: int | None = None
    stall_limit: int = DEFAULT_STALL_LIMIT
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT

    def __post_init__(self) -> None:
        if self.mode not in ("exhaustive", "branch_and_bound", "threshold_descent"):
            raise SpecError("mode", f"unknown solver mode {self.mode!r}")
        if not 0 <= self.tau <= 1:
            raise SpecError("tau", f"must lie in [0, 1], got {self.tau}")
        if self.time_budget <= 0:
            raise SpecError("time_budget", f"must be positive, got {self.time_budget}")
        if self.restarts < 1:
            raise SpecError("restarts", f"must be >= 1, got {self.restarts}")
        if self.threshold_step < 1:
            raise SpecError("threshold_step", f"must be >= 1 kg, got {self.threshold_step}")
        if self.initial_threshold not in ("open", "warm"):
            raise SpecError("initial_threshold", f"unknown value {self.initial_threshold!r}")
        if self.stall_limit < 1:
            raise SpecError("stall_limit", f"must be >= 1, got {self.stall_limit}")
        object.__setattr__(self, "seed", resolve_seed(self.seed))
        object.__setattr__(self, "threads", resolve_threads(self.threads))

    def reference(self, spec: AircraftSpec, payload: Payload) -> int:
        return self.reference_mass if self.reference_mass is not None else w_max(spec, payload)


@dataclass(frozen=True, slots=True)
class TracePoint:
    """Wall time (s since start) at which an incumbent of this mass was found."""

    time: float
    mass: int


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one solve call."""

    status: SolveStatus
    incumbent: Assignment | None
    trace: tuple[TracePoint, ...]
    n_l: int
    wall_time: float
    mode: SolveMode
    iterations: int = 0

    @property
    def mass(self) -> int:
        return self.trace[-1].mass if self.trace else 0

    @property
    def found(self) -> bool:
        return self.incumbent is not None

    @property
    def reached(self) -> bool:
        """True for the statuses the CLI reports as success."""
        return self.status in ("optimal", "tau_reached")

"""Power-law fits of time-to-target against nonzero count."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import stats

from alopt.bench.harness import BenchRecord
from alopt.exceptions import FitError

ReferenceVariant = Literal["mass", "cg"]

MIN_FIT_POINTS = 4
REFERENCE_R_RANGE = (0.5, 3.0)
# log10 t = (a*r + b) + (c*r + d) * log10 n_l; the CG variant shifts b.
REFERENCE_SLOPE_A = -0.65
REFERENCE_OFFSET_B: dict[ReferenceVariant, float] = {"mass": -4.8, "cg": -4.2}
REFERENCE_SLOPE_C = 0.11
REFERENCE_OFFSET_D = 1.25


@dataclass(frozen=True, slots=True)
class ScalingFit:
    """log10 t = log_prefactor + exponent * log10 n_l for one ratio r."""

    ratio: float
    exponent: float
    log_prefactor: float
    r_value: float
    residual_rms: float
    residual_max: float
    points: int

    def predict(self, n_l: float) -> float:
        return float(10 ** (self.log_prefactor + self.exponent * math.log10(n_l)))

    def to_dict(self) -> dict[str, float | int]:
        return {
            "r": self.ratio,
            "exponent": self.exponent,
            "log_prefactor": self.log_prefactor,
            "r_value": self.r_value,
            "residual_rms": self.residual_rms,
            "residual_max": self.residual_max,
            "points": self.points,
        }


@dataclass(frozen=True, slots=True)
class LinearFit:
    """Ordinary least squares y = slope * x + intercept."""

    slope: float
    intercept: float
    r_squared: float
    points: int


def _same_ratio(a: float, b: float) -> bool:
    return round(a, 3) == round(b, 3)


def fit_scaling(records: Sequence[BenchRecord], r: float) -> ScalingFit:
    """Fit the power law on the tau_reached records with ratio ``r``.

    Raises:
        FitError: Fewer than 4 usable points, or no spread in n_l.
    """
    usable = [
        rec
        for rec in records
        if _same_ratio(rec.r, r) and rec.status == "tau_reached" and rec.time_s is not None and rec.time_s > 0
    ]
    if len(usable) < MIN_FIT_POINTS:
        raise FitError(f"r={r:g}: need at least {MIN_FIT_POINTS} solved points, got {len(usable)}")

    x = np.log10([rec.n_l for rec in usable])
    y = np.log10([rec.time_s for rec in usable])
    if np.ptp(x) == 0:
        raise FitError(f"r={r:g}: all points share n_l={usable[0].n_l}")

    fit = stats.linregress(x, y)
    residuals = y - (fit.intercept + fit.slope * x)
    return ScalingFit(
        ratio=round(r, 3),
        exponent=float(fit.slope),
        log_prefactor=float(fit.intercept),
        r_value=float(fit.rvalue),
        residual_rms=float(np.sqrt(np.mean(residuals**2))),
        residual_max=float(np.max(np.abs(residuals))),
        points=len(usable),
    )


def fit_all(records: Sequence[BenchRecord]) -> dict[float, ScalingFit | FitError]:
    """Fit every ratio present; ratios without enough data map to their error."""
    out: dict[float, ScalingFit | FitError] = {}
    for r in sorted({rec.r for rec in records}):
        try:
            out[r] = fit_scaling(records, r)
        except FitError as e:
            out[r] = e
    return out


def reference_valid(r: float) -> bool:
    low, high = REFERENCE_R_RANGE
    return low <= r <= high


def reference_time(n_l: float, r: float, variant: ReferenceVariant = "mass") -> float:
    """Published hardware time-to-target law, seconds.

    Only meaningful for 0.5 <= r <= 3 (see ``reference_valid``).
    """
    if n_l <= 0:
        raise FitError(f"n_l must be positive, got {n_l}")
    log_t = (REFERENCE_SLOPE_A * r + REFERENCE_OFFSET_B[variant]) + (
        REFERENCE_SLOPE_C * r + REFERENCE_OFFSET_D
    ) * math.log10(n_l)
    return float(10**log_t)


def fit_nonzeros(records: Sequence[BenchRecord]) -> LinearFit:
    """Regress n_l on n * N**2 over all records."""
    if len(records) < 2:
        raise FitError(f"need at least 2 records, got {len(records)}")
    x = np.array([rec.n * rec.N**2 for rec in records], dtype=np.float64)
    y = np.array([rec.n_l for rec in records], dtype=np.float64)
    if np.ptp(x) == 0:
        raise FitError("all records share the same n * N^2")
    fit = stats.linregress(x, y)
    return LinearFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
        points=len(records),
    )

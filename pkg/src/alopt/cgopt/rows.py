"""Extra rows used while optimizing the center of gravity."""

from __future__ import annotations

from fractions import Fraction

from alopt.exceptions import SpecError
from alopt.model.constraints import Row, cg_rows
from alopt.model.variables import VariableMap
from alopt.types import AircraftSpec, Payload, to_fraction


def mass_floor_row(
    spec: AircraftSpec,
    payload: Payload,
    tau: float | Fraction,
    w_max: int,
) -> Row:
    """``-sum m_k y <= -tau * W^max``, tagged mass_floor."""
    tau_exact = to_fraction(tau)
    if not 0 <= tau_exact <= 1:
        raise SpecError("tau", f"must lie in [0, 1], got {tau}")
    variables = VariableMap.for_payload(payload, spec.bin_count)
    return Row.from_fractions(
        "mass_floor",
        0,
        range(len(variables)),
        [Fraction(-int(m)) for m in variables.masses],
        -tau_exact * w_max,
    )


def remap_cg_objective(
    spec: AircraftSpec,
    payload: Payload,
    bound: float | Fraction,
) -> tuple[Row, Row]:
    """Linear pair equivalent to |x_cg - x_target| <= bound.

    Both rows are the center-of-gravity window rows for
    [x_target - bound, x_target + bound], with the positive denominator
    W_e + carried mass cleared.
    """
    b = to_fraction(bound)
    if b < 0:
        raise SpecError("bound", f"must be >= 0, got {bound}")
    target = to_fraction(spec.cg_target)
    variables = VariableMap.for_payload(payload, spec.bin_count)
    return cg_rows(
        spec,
        variables,
        target - b,
        target + b,
        tags=("cg_window", "cg_window"),
        indices=(1, 2),
    )

"""Binary IP constraint system: exact rows, objective and the float matrix view."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property

import numpy as np
import numpy.typing as npt
from scipy import sparse

from alopt.exceptions import DimensionError
from alopt.model.geometry import bin_domain, signed_distance
from alopt.model.variables import VariableMap
from alopt.types import AircraftSpec, Payload, RowTag, ShearSide, to_fraction

logger = logging.getLogger(__name__)

ROW_PREFIX: dict[RowTag, str] = {
    "placement": "PLC",
    "bin": "BIN",
    "weight": "WGT",
    "cg_upper": "CGU",
    "cg_lower": "CGL",
    "shear_left": "SHL",
    "shear_right": "SHR",
    "mass_floor": "MFL",
    "cg_window": "CGW",
}

# cg_window rows come in a pair; index 1 bounds from above, index 2 from below
CG_WINDOW_SUFFIX = {1: "U", 2: "L"}


@dataclass(frozen=True, slots=True)
class Row:
    """One ``<=`` inequality with exact rational coefficients.

    Coefficients are stored as integer numerators over a single positive
    denominator so that lhs/rhs comparisons never round.
    """

    tag: RowTag
    index: int
    columns: tuple[int, ...]
    numerators: tuple[int, ...]
    rhs_numerator: int
    denominator: int = 1

    def __post_init__(self) -> None:
        if len(self.columns) != len(self.numerators):
            raise DimensionError(
                f"Row {self.name}: {len(self.columns)} columns but {len(self.numerators)} coefficients"
            )
        if self.denominator <= 0:
            raise DimensionError(f"Row {self.name}: denominator must be positive")

    @classmethod
    def from_fractions(
        cls,
        tag: RowTag,
        index: int,
        columns: Sequence[int],
        coefficients: Sequence[Fraction],
        rhs: Fraction,
    ) -> Row:
        """Clear denominators of rational coefficients into one common denominator."""
        den = math.lcm(rhs.denominator, *(c.denominator for c in coefficients))
        return cls(
            tag=tag,
            index=index,
            columns=tuple(columns),
            numerators=tuple(int(c * den) for c in coefficients),
            rhs_numerator=int(rhs * den),
            denominator=den,
        )

    @property
    def name(self) -> str:
        prefix = ROW_PREFIX[self.tag]
        if self.tag == "cg_window":
            return prefix + CG_WINDOW_SUFFIX.get(self.index, str(self.index))
        if self.tag in ("placement", "bin", "shear_left", "shear_right"):
            return f"{prefix}_{self.index}"
        return prefix

    @property
    def rhs(self) -> Fraction:
        return Fraction(self.rhs_numerator, self.denominator)

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.denominator) for n in self.numerators)

    @property
    def is_monotone(self) -> bool:
        """True if adding a placement can never decrease the lhs."""
        return all(n >= 0 for n in self.numerators)

    def lhs_numerator(self, x: Sequence[bool] | npt.NDArray[np.bool_]) -> int:
        active = x.tolist() if isinstance(x, np.ndarray) else x
        return sum(n for c, n in zip(self.columns, self.numerators, strict=True) if active[c])

    def lhs(self, x: Sequence[bool] | npt.NDArray[np.bool_]) -> Fraction:
        return Fraction(self.lhs_numerator(x), self.denominator)


@dataclass(frozen=True, slots=True)
class Violation:
    """A row whose lhs exceeds its rhs; slack = rhs - lhs is negative."""

    tag: RowTag
    index: int
    lhs: Fraction
    rhs: Fraction

    @property
    def slack(self) -> Fraction:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class ConstraintSystem:
    """Sparse ``A y <= b`` rows plus an integer objective to minimize."""

    variables: VariableMap
    rows: tuple[Row, ...]
    objective: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.objective) != len(self.variables):
            raise DimensionError(
                f"Objective has {len(self.objective)} entries for {len(self.variables)} variables"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.variables)

    @property
    def is_null_objective(self) -> bool:
        return not any(self.objective)

    @cached_property
    def matrix(self) -> sparse.csr_matrix:
        """Float view of the coefficients, for the heuristic solvers."""
        indptr = [0]
        indices: list[int] = []
        data: list[float] = []
        for row in self.rows:
            indices.extend(row.columns)
            data.extend(n / row.denominator for n in row.numerators)
            indptr.append(len(indices))
        return sparse.csr_matrix(
            (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64), indptr),
            shape=self.shape,
        )

    @cached_property
    def rhs_vector(self) -> npt.NDArray[np.float64]:
        return np.asarray([r.rhs_numerator / r.denominator for r in self.rows], dtype=np.float64)

    def tagged(self, *tags: RowTag) -> tuple[Row, ...]:
        return tuple(r for r in self.rows if r.tag in tags)

    def row(self, tag: RowTag, index: int = 0) -> Row:
        for r in self.rows:
            if r.tag == tag and r.index == index:
                return r
        raise KeyError(f"No row {tag}[{index}]")

    def with_rows(self, rows: Iterable[Row]) -> ConstraintSystem:
        return replace(self, rows=self.rows + tuple(rows))

    def without_tags(self, *tags: RowTag) -> ConstraintSystem:
        return replace(self, rows=tuple(r for r in self.rows if r.tag not in tags))

    def with_objective(self, objective: Sequence[int] | None) -> ConstraintSystem:
        """Replace the objective; ``None`` installs the null objective."""
        if objective is None:
            return replace(self, objective=(0,) * len(self.variables))
        return replace(self, objective=tuple(int(v) for v in objective))

    def objective_value(self, x: npt.NDArray[np.bool_]) -> int:
        return sum(c for c, on in zip(self.objective, x.tolist(), strict=True) if on)

    def violations(self, x: npt.NDArray[np.bool_]) -> list[Violation]:
        """Exact check of every row against a 0/1 vector."""
        if x.shape != (len(self.variables),):
            raise DimensionError(f"Vector of shape {x.shape} for {len(self.variables)} variables")
        active = x.tolist()
        found: list[Violation] = []
        for row in self.rows:
            lhs = row.lhs_numerator(active)
            if lhs > row.rhs_numerator:
                found.append(
                    Violation(
                        tag=row.tag,
                        index=row.index,
                        lhs=Fraction(lhs, row.denominator),
                        rhs=row.rhs,
                    )
                )
        return found

    def is_feasible(self, x: npt.NDArray[np.bool_]) -> bool:
        active = x.tolist()
        return all(row.lhs_numerator(active) <= row.rhs_numerator for row in self.rows)


def count_nonzeros(system: ConstraintSystem) -> int:
    """n_l: stored coefficients across all rows, objective excluded."""
    return sum(len(row.columns) for row in system.rows)


def _shear_row(
    spec: AircraftSpec, variables: VariableMap, j: int, side: ShearSide
) -> Row:
    n_bins = spec.bin_count
    columns: list[int] = []
    coefficients: list[Fraction] = []
    for container in variables.containers:
        mass = Fraction(container.mass)
        if side == "left":
            if container.size == 3:
                span = [(p, mass) for p in range(1, j)] + [(j, mass / 2)]
            else:
                span = [(p, mass) for p in range(1, j + 1)]
        elif container.size == 3:
            span = [(n_bins - j, mass / 2)] + [(p, mass) for p in range(n_bins - j + 1, n_bins)]
        else:
            span = [(p, mass) for p in range(n_bins - j + 1, n_bins + 1)]
        for p, coefficient in span:
            columns.append(variables.index(container.id, p))
            coefficients.append(coefficient)
    tag: RowTag = "shear_left" if side == "left" else "shear_right"
    return Row.from_fractions(tag, j, columns, coefficients, spec.shear_rhs(j, side))


def cg_rows(
    spec: AircraftSpec,
    variables: VariableMap,
    cg_min: Fraction,
    cg_max: Fraction,
    *,
    tags: tuple[RowTag, RowTag] = ("cg_upper", "cg_lower"),
    indices: tuple[int, int] = (0, 0),
) -> tuple[Row, Row]:
    """The linearized pair ``cg_min <= x_cg <= cg_max``, denominators cleared by W_e + mass."""
    empty_mass = Fraction(spec.empty_mass)
    empty_cg = to_fraction(spec.empty_cg)
    columns = range(len(variables))
    distances = [
        signed_distance(int(s), int(j), variables.bin_count)
        for s, j in zip(variables.sizes, variables.bins, strict=True)
    ]
    masses = [int(m) for m in variables.masses]
    upper = Row.from_fractions(
        tags[0],
        indices[0],
        columns,
        [m * (d - cg_max) for m, d in zip(masses, distances, strict=True)],
        empty_mass * (cg_max - empty_cg),
    )
    lower = Row.from_fractions(
        tags[1],
        indices[1],
        columns,
        [m * (cg_min - d) for m, d in zip(masses, distances, strict=True)],
        empty_mass * (empty_cg - cg_min),
    )
    return upper, lower


def build_constraints(
    spec: AircraftSpec,
    payload: Payload,
    *,
    cg_window: tuple[Fraction, Fraction] | None = None,
) -> ConstraintSystem:
    """Build the full loading problem for an instance.

    Args:
        spec: Aircraft parameters
        payload: Available containers
        cg_window: Exact (cg_min, cg_max) overriding the aircraft window

    Returns:
        System with n placement rows, N bin rows, the weight row, two CG
        rows and 2*floor(N/2) shear rows; objective -m_k per variable
    """
    n_bins = spec.bin_count
    variables = VariableMap.for_payload(payload, n_bins)
    rows: list[Row] = []

    for container in variables.containers:
        block = variables.block(container.id)
        rows.append(Row("placement", container.id, tuple(block), (1,) * len(block), 1))

    for j in range(1, n_bins + 1):
        columns: list[int] = []
        coefficients: list[Fraction] = []
        for container in variables.containers:
            if container.size == 3:
                for p in (j - 1, j):
                    if p in bin_domain(3, n_bins):
                        columns.append(variables.index(container.id, p))
                        coefficients.append(Fraction(1))
            else:
                columns.append(variables.index(container.id, j))
                coefficients.append(Fraction(1, container.size))
        rows.append(Row.from_fractions("bin", j, columns, coefficients, Fraction(1)))

    rows.append(
        Row(
            "weight",
            0,
            tuple(range(len(variables))),
            tuple(int(m) for m in variables.masses),
            spec.max_payload,
        )
    )

    if cg_window is None:
        cg_window = (to_fraction(spec.cg_min), to_fraction(spec.cg_max))
    rows.extend(cg_rows(spec, variables, *cg_window))

    sides: tuple[ShearSide, ...] = ("left", "right")
    for side in sides:
        for j in range(1, spec.half_bins + 1):
            rows.append(_shear_row(spec, variables, j, side))

    system = ConstraintSystem(
        variables=variables,
        rows=tuple(rows),
        objective=tuple(-int(m) for m in variables.masses),
    )
    logger.debug(
        "Built system: %d rows, %d variables, n_l=%d",
        len(system.rows),
        len(variables),
        count_nonzeros(system),
    )
    return system

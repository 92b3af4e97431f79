"""Type definitions for alopt."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Literal

from alopt.exceptions import SpecError

ContainerSize = Literal[1, 2, 3]
ShearShape = Literal["linear", "table"]
ShearSide = Literal["left", "right"]
SolveMode = Literal["exhaustive", "branch_and_bound", "threshold_descent"]
SolveStatus = Literal[
    "optimal",
    "tau_reached",
    "budget_exhausted",
    "infeasible_proven",
    "no_solution_found",
]
RowTag = Literal[
    "placement",
    "bin",
    "weight",
    "cg_upper",
    "cg_lower",
    "shear_left",
    "shear_right",
    "mass_floor",
    "cg_window",
]

SIZES: tuple[ContainerSize, ...] = (1, 2, 3)


def to_fraction(value: float | int | Fraction) -> Fraction:
    """Exact rational for a decimal input, read through its shortest repr."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(repr(float(value)))


@dataclass(frozen=True, slots=True)
class ShearLimit:
    """Maximum shear curve sampled at bin centers.

    ``linear`` is symmetric and rises from the fuselage ends to ``peak`` at the
    center: the limit for the j-th bin counted from either end is
    ``peak * j / floor(N/2)``. ``table`` lists the limits explicitly for
    j = 1..floor(N/2) on each side.
    """

    peak: int | float
    shape: ShearShape = "linear"
    left: tuple[int | float, ...] = ()
    right: tuple[int | float, ...] = ()

    def __post_init__(self) -> None:
        if self.peak <= 0:
            raise SpecError("shear_limit.peak", f"must be positive, got {self.peak}")
        if self.shape not in ("linear", "table"):
            raise SpecError("shear_limit.shape", f"unknown shape {self.shape!r}")
        if self.shape == "table" and len(self.left) != len(self.right):
            raise SpecError("shear_limit", "left and right tables differ in length")

    def limit(self, j: int, side: ShearSide, half: int) -> Fraction:
        """Limit of the shear row j (1-based, counted from the nearest end)."""
        if self.shape == "linear":
            return to_fraction(self.peak) * j / half
        table = self.left if side == "left" else self.right
        return to_fraction(table[j - 1])


@dataclass(frozen=True, slots=True)
class AircraftSpec:
    """Aircraft-side parameters. Positions are fractions of the loading length."""

    bin_count: int
    max_payload: int
    empty_mass: int
    empty_cg: float
    cg_min: float
    cg_max: float
    cg_target: float
    shear_limit: ShearLimit

    def __post_init__(self) -> None:
        if self.bin_count < 2:
            raise SpecError("bin_count", f"need at least 2 bins, got {self.bin_count}")
        if self.max_payload <= 0:
            raise SpecError("max_payload", "must be positive")
        if self.empty_mass <= 0:
            raise SpecError("empty_mass", "must be positive")
        if self.cg_min > self.cg_max:
            raise SpecError("cg window", f"cg_min {self.cg_min} > cg_max {self.cg_max}")
        for name in ("empty_cg", "cg_min", "cg_max", "cg_target"):
            value = getattr(self, name)
            if not -0.5 <= value <= 0.5:
                raise SpecError(name, f"{value} outside [-0.5, 0.5]")
        if self.shear_limit.shape == "table" and len(self.shear_limit.left) != self.half_bins:
            raise SpecError(
                "shear_limit",
                f"table needs {self.half_bins} entries per side, got {len(self.shear_limit.left)}",
            )

    @property
    def half_bins(self) -> int:
        """Number of shear rows per side, floor(N/2)."""
        return self.bin_count // 2

    def shear_rhs(self, j: int, side: ShearSide) -> Fraction:
        return self.shear_limit.limit(j, side, self.half_bins)


@dataclass(frozen=True, slots=True)
class Container:
    """A container triplet (id, size, mass in kg)."""

    id: int
    size: ContainerSize
    mass: int

    def __post_init__(self) -> None:
        if self.id <= 0:
            raise SpecError("container.id", f"must be positive, got {self.id}")
        if self.size not in SIZES:
            raise SpecError(f"container {self.id} size", f"{self.size} not in {{1, 2, 3}}")
        if self.mass <= 0:
            raise SpecError(f"container {self.id} mass", f"must be positive, got {self.mass}")


@dataclass(frozen=True)
class Payload:
    """Ordered list of available containers."""

    containers: tuple[Container, ...] = ()

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for container in self.containers:
            if container.id in seen:
                raise SpecError("payload", f"duplicate container id {container.id}")
            seen.add(container.id)

    def __len__(self) -> int:
        return len(self.containers)

    @cached_property
    def by_id(self) -> Mapping[int, Container]:
        return {c.id: c for c in self.containers}

    @cached_property
    def partition(self) -> Mapping[ContainerSize, tuple[int, ...]]:
        """Index sets K1, K2, K3 (container ids grouped by size)."""
        return {s: tuple(c.id for c in self.containers if c.size == s) for s in SIZES}

    @property
    def size_counts(self) -> tuple[int, int, int]:
        part = self.partition
        return len(part[1]), len(part[2]), len(part[3])

    @property
    def total_mass(self) -> int:
        return sum(c.mass for c in self.containers)


@dataclass(frozen=True, slots=True)
class Assignment:
    """Binary placement variables, stored as the set of (k, j) with y[k, j] = 1."""

    pairs: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    @classmethod
    def empty(cls) -> Assignment:
        return cls(frozenset())

    @classmethod
    def from_placements(cls, placements: Mapping[int, int]) -> Assignment:
        """Build from a container id -> bin mapping."""
        return cls(frozenset(placements.items()))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> Assignment:
        return cls(frozenset((int(k), int(j)) for k, j in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    @property
    def placed_ids(self) -> frozenset[int]:
        return frozenset(k for k, _ in self.pairs)

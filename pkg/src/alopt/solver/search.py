"""Depth-first enumeration engine shared by the exact solvers.

Containers are decided one per level: each level tries the container's bins
in ascending order and then leaves it out. Row left-hand sides are kept as
exact integer numerators and updated incrementally.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from alopt.exceptions import DimensionError
from alopt.model.constraints import ConstraintSystem

logger = logging.getLogger(__name__)

LEAVE_OUT = -1
# how many nodes between two clock reads
CLOCK_STRIDE = 1024


@dataclass(frozen=True, slots=True)
class SearchNode:
    """State handed to a node hook before a level is branched on."""

    depth: int
    placements: tuple[tuple[int, int], ...]
    value: int
    bound: int


NodeHook = Callable[[SearchNode], None]


@dataclass
class SearchResult:
    best_value: int | None = None
    best_columns: tuple[int, ...] = ()
    complete: bool = False
    stopped_early: bool = False
    nodes: int = 0
    trace: list[tuple[float, int, tuple[int, ...]]] = field(default_factory=list)


class DepthFirstSearch:
    """Exact search over placements of a constraint system.

    Args:
        system: Rows and objective; the engine maximizes ``-objective``
        order: Container ids in branching order
        prune_with_bounds: Use lower-bound row pruning and the objective
            bound (branch-and-bound); otherwise only rows whose coefficients
            are all non-negative are checked before the leaves
        deadline: ``time.perf_counter()`` value after which the search stops
        stop_value: Stop as soon as an incumbent reaches this objective value
        first_feasible: Stop at the first feasible leaf
        node_hook: Called at every node where a bound is computed
    """

    def __init__(
        self,
        system: ConstraintSystem,
        order: Sequence[int],
        *,
        prune_with_bounds: bool,
        deadline: float | None = None,
        stop_value: Fraction | None = None,
        first_feasible: bool = False,
        node_hook: NodeHook | None = None,
    ) -> None:
        self._system = system
        self._variables = system.variables
        self._order = list(order)
        self._prune = prune_with_bounds
        self._deadline = deadline
        self._stop_value = stop_value
        self._first_feasible = first_feasible
        self._hook = node_hook

        rows = system.rows
        self._rhs = [r.rhs_numerator for r in rows]
        monotone = [r.is_monotone for r in rows]
        self._late_rows = [i for i, m in enumerate(monotone) if not m]
        late = set(self._late_rows)

        incidence: dict[int, list[tuple[int, int]]] = {}
        for r, row in enumerate(rows):
            for column, numerator in zip(row.columns, row.numerators, strict=True):
                incidence.setdefault(column, []).append((r, numerator))
        self._incidence = incidence

        self._gain = [-c for c in system.objective]
        self._options: list[list[int]] = []
        self._checked: list[list[int]] = []
        self._reserve_delta: list[dict[int, int]] = []
        for k in self._order:
            columns = list(self._variables.block(k))
            self._options.append(columns + [LEAVE_OUT])
            touched = sorted({r for c in columns for r, _ in incidence.get(c, [])})
            if self._prune:
                low: dict[int, int] = {}
                for c in columns:
                    for r, n in incidence.get(c, []):
                        low[r] = min(low.get(r, 0), n)
                self._reserve_delta.append({r: v for r, v in low.items() if v < 0})
                self._checked.append(touched)
            else:
                self._reserve_delta.append({})
                self._checked.append([r for r in touched if monotone[r]])

        depth = len(self._order)
        best_gain = [max([0] + [self._gain[c] for c in opts if c != LEAVE_OUT]) for opts in self._options]
        self._remaining_gain = [0] * (depth + 1)
        for d in range(depth - 1, -1, -1):
            self._remaining_gain[d] = self._remaining_gain[d + 1] + best_gain[d]

        masses = self._variables.masses.tolist()
        self._mass_objective = all(g == m for g, m in zip(self._gain, masses, strict=True))
        if not self._mass_objective:
            self._stop_value = None
        self._capacity_rows: list[tuple[int, ...]] = []
        if self._mass_objective:
            for tag in ("weight",):
                self._capacity_rows.extend((i,) for i, r in enumerate(rows) if r.tag == tag)
            half = self._variables.bin_count // 2
            if self._variables.bin_count % 2 == 0:
                left = [i for i, r in enumerate(rows) if r.tag == "shear_left" and r.index == half]
                right = [i for i, r in enumerate(rows) if r.tag == "shear_right" and r.index == half]
                if left and right:
                    self._capacity_rows.append((left[0], right[0]))
        self._denominators = [r.denominator for r in rows]
        self._root_rows = [r for r in range(len(rows)) if self._prune or r not in late]
        self.root_bound = self._bound(0, 0, [0] * len(rows))

    def _bound(self, depth: int, value: int, lhs: list[int]) -> int:
        extra = self._remaining_gain[depth]
        for group in self._capacity_rows:
            room = sum(
                Fraction(self._rhs[r] - lhs[r], self._denominators[r]) for r in group
            )
            extra = min(extra, max(0, int(room)))
        return value + extra

    def run(self) -> SearchResult:
        result = SearchResult()
        depth_total = len(self._order)
        lhs = [0] * len(self._rhs)
        reserve = [0] * len(self._rhs)
        for deltas in self._reserve_delta:
            for r, v in deltas.items():
                reserve[r] += v
        if any(lhs[r] + reserve[r] > self._rhs[r] for r in self._root_rows):
            result.complete = True
            return result

        start = time.perf_counter()
        chosen: list[int] = []
        cursor = [0] * (depth_total + 1)
        value = 0
        depth = 0
        best: int | None = None

        while True:
            result.nodes += 1
            if result.nodes % CLOCK_STRIDE == 0 and self._deadline is not None:
                if time.perf_counter() >= self._deadline:
                    result.stopped_early = True
                    break

            if depth == depth_total:
                if all(lhs[r] <= self._rhs[r] for r in self._late_rows) and (best is None or value > best):
                    best = value
                    result.best_value = value
                    result.best_columns = tuple(c for c in chosen if c != LEAVE_OUT)
                    result.trace.append((time.perf_counter() - start, value, result.best_columns))
                    logger.debug("Incumbent value %d after %d nodes", value, result.nodes)
                    if self._first_feasible or (
                        self._stop_value is not None and value >= self._stop_value
                    ):
                        result.stopped_early = True
                        break
                depth, value = self._backtrack(depth, chosen, lhs, reserve, value)
                if depth < 0:
                    result.complete = True
                    break
                continue

            if cursor[depth] == 0 and self._prune:
                bound = self._bound(depth, value, lhs)
                if self._hook is not None:
                    self._hook(
                        SearchNode(
                            depth=depth,
                            placements=tuple(self._variables.pair(c) for c in chosen if c != LEAVE_OUT),
                            value=value,
                            bound=bound,
                        )
                    )
                if best is not None and bound <= best and not self._first_feasible:
                    depth, value = self._backtrack(depth, chosen, lhs, reserve, value)
                    if depth < 0:
                        result.complete = True
                        break
                    continue

            options = self._options[depth]
            advanced = False
            while cursor[depth] < len(options):
                column = options[cursor[depth]]
                cursor[depth] += 1
                if self._apply(depth, column, lhs, reserve):
                    chosen.append(column)
                    if column != LEAVE_OUT:
                        value += self._gain[column]
                    depth += 1
                    cursor[depth] = 0
                    advanced = True
                    break
            if not advanced:
                cursor[depth] = 0
                depth, value = self._backtrack(depth, chosen, lhs, reserve, value)
                if depth < 0:
                    result.complete = True
                    break

        return result

    def _apply(self, depth: int, column: int, lhs: list[int], reserve: list[int]) -> bool:
        """Place ``column`` (or leave out) at ``depth``; undo and return False if a row fails."""
        for r, v in self._reserve_delta[depth].items():
            reserve[r] -= v
        if column != LEAVE_OUT:
            for r, n in self._incidence.get(column, []):
                lhs[r] += n
        for r in self._checked[depth]:
            if lhs[r] + reserve[r] > self._rhs[r]:
                self._undo(depth, column, lhs, reserve)
                return False
        return True

    def _undo(self, depth: int, column: int, lhs: list[int], reserve: list[int]) -> None:
        if column != LEAVE_OUT:
            for r, n in self._incidence.get(column, []):
                lhs[r] -= n
        for r, v in self._reserve_delta[depth].items():
            reserve[r] += v

    def _backtrack(
        self, depth: int, chosen: list[int], lhs: list[int], reserve: list[int], value: int
    ) -> tuple[int, int]:
        """Pop the last decision; returns the new depth (-1 when exhausted) and value."""
        if not chosen:
            return -1, value
        column = chosen.pop()
        depth -= 1
        self._undo(depth, column, lhs, reserve)
        if column != LEAVE_OUT:
            value -= self._gain[column]
        return depth, value


def columns_mass(system: ConstraintSystem, columns: Sequence[int]) -> int:
    masses = system.variables.masses
    return int(sum(int(masses[c]) for c in columns))


def check_alignment(system: ConstraintSystem, payload_ids: set[int]) -> None:
    """The system must be built over exactly the payload's containers."""
    system_ids = {c.id for c in system.variables.containers}
    if system_ids != payload_ids:
        missing = sorted(payload_ids - system_ids)
        extra = sorted(system_ids - payload_ids)
        raise DimensionError(
            f"System does not match the payload (missing ids {missing}, unknown ids {extra})"
        )

"""Dynamic-threshold descent: repeated feasibility searches under a rising mass floor.

The mass objective becomes the extra row ``-sum m_k y <= -threshold``. A
weighted constraint-violation local search looks for a point satisfying every
row; each exact-feasible point of mass M is recorded and the floor moves to
M + delta. Walks restart from randomized greedy loadings.
"""

from __future__ import annotations

import logging
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import numpy.typing as npt
from scipy import sparse

from alopt.exceptions import SpecError
from alopt.model.constraints import ConstraintSystem, count_nonzeros
from alopt.solver.search import check_alignment
from alopt.solver.types import SolveConfig, SolveReport, TracePoint, mass_target
from alopt.types import AircraftSpec, Assignment, Payload, SolveStatus

logger = logging.getLogger(__name__)

TOLERANCE = 1e-9
SAMPLE_SIZE = 24
SWAP_SAMPLE = 8
NOISE = 0.05
WEIGHT_DECAY = 0.95
CLOCK_STRIDE = 64


class _FloatModel:
    """Row-normalized float view of a system, sliced per container."""

    def __init__(self, system: ConstraintSystem) -> None:
        variables = system.variables
        self.system = system
        matrix = system.matrix
        n_rows = matrix.shape[0]
        scale = np.ones(n_rows)
        if matrix.nnz:
            row_max = abs(matrix).max(axis=1).toarray().ravel()
            scale = np.where(row_max > 0, row_max, 1.0)
        self.rhs = system.rhs_vector / scale
        normalized = (sparse.diags(1.0 / scale) @ matrix).tocsc()
        self.monotone = np.asarray([r.is_monotone for r in system.rows], dtype=np.bool_)

        self.slot_ids = [c.id for c in variables.containers]
        self.masses = np.asarray([c.mass for c in variables.containers], dtype=np.int64)
        self.sizes = np.asarray([c.size for c in variables.containers], dtype=np.int64)
        self.columns: list[npt.NDArray[np.int64]] = []
        self.rows: list[npt.NDArray[np.int64]] = []
        self.sub: list[npt.NDArray[np.float64]] = []
        for container in variables.containers:
            block = np.arange(variables.block(container.id).start, variables.block(container.id).stop)
            part = normalized[:, block]
            rows = np.unique(part.indices)
            self.columns.append(block)
            self.rows.append(rows)
            self.sub.append(part[rows, :].toarray() if rows.size else np.zeros((0, block.size)))
        self.col_rows = [normalized.indices[normalized.indptr[c] : normalized.indptr[c + 1]] for c in range(len(variables))]
        self.col_vals = [normalized.data[normalized.indptr[c] : normalized.indptr[c + 1]] for c in range(len(variables))]
        self.floor_scale = float(self.masses.max()) if self.masses.size else 1.0
        self.same_size = {int(s): np.flatnonzero(self.sizes == s) for s in np.unique(self.sizes)}

    @property
    def n_slots(self) -> int:
        return len(self.slot_ids)


class _Incumbent:
    """Best mass shared by all walks; updates are max-merges under a lock."""

    def __init__(
        self,
        threshold: int | None,
        step: int,
        target: Fraction | None,
        start: float,
        deadline: float,
    ) -> None:
        self.threshold = threshold
        self.step = step
        self.target = target
        self.start = start
        self.deadline = deadline
        self.best_mass = -1
        self.best_columns: tuple[int, ...] | None = None
        self.trace: list[TracePoint] = []
        self.stop = False
        self.iterations = 0
        self._lock = threading.Lock()

    def offer(self, mass: int, columns: tuple[int, ...]) -> bool:
        with self._lock:
            if mass <= self.best_mass or (self.threshold is not None and mass < self.threshold):
                return False
            self.best_mass = mass
            self.best_columns = columns
            self.trace.append(TracePoint(time.perf_counter() - self.start, mass))
            self.threshold = mass + self.step
            logger.debug("Incumbent mass %d, threshold now %d", mass, self.threshold)
            if self.target is None or mass >= self.target:
                self.stop = True
            return True

    def count(self, steps: int) -> None:
        with self._lock:
            self.iterations += steps

    def done(self) -> bool:
        if not self.stop and time.perf_counter() >= self.deadline:
            self.stop = True
        return self.stop


@dataclass
class _Move:
    delta: float
    raw: float
    slot: int
    option: int
    partner: int = -1


class _Walker:
    """One local-search stream with its own generator and row weights."""

    def __init__(
        self,
        model: _FloatModel,
        rng: np.random.Generator,
        shared: _Incumbent,
        stall_limit: int,
    ) -> None:
        self.m = model
        self.rng = rng
        self.shared = shared
        self.stall_limit = stall_limit
        n_rows = model.rhs.size
        self.pos = np.full(model.n_slots, -1, dtype=np.int64)
        self.lhs = np.zeros(n_rows)
        self.mass = 0
        self.weights = np.ones(n_rows)
        self.floor_weight = 1.0
        self.tabu_until = np.zeros(model.n_slots, dtype=np.int64)
        self.tenure = max(2, min(10, model.n_slots // 4))

    # --- state ---------------------------------------------------------------

    def _reset(self) -> None:
        m = self.m
        self.pos[:] = -1
        self.lhs[:] = 0.0
        self.mass = 0
        self.weights[:] = 1.0
        self.floor_weight = 1.0
        self.tabu_until[:] = 0
        noise = self.rng.uniform(0.75, 1.25, m.n_slots)
        order = np.argsort(-(m.masses * noise), kind="stable")
        for s in order.tolist():
            rows = m.rows[s]
            if rows.size == 0:
                continue
            trial = self.lhs[rows][:, None] + m.sub[s]
            over = trial - m.rhs[rows][:, None] > TOLERANCE
            over &= m.monotone[rows][:, None]
            fits = np.flatnonzero(~over.any(axis=0))
            if fits.size:
                self._place(s, int(self.rng.choice(fits)))

    def _place(self, s: int, option: int) -> None:
        m = self.m
        current = int(self.pos[s])
        if current >= 0:
            c = int(m.columns[s][current])
            self.lhs[m.col_rows[c]] -= m.col_vals[c]
            self.mass -= int(m.masses[s])
        if option >= 0:
            c = int(m.columns[s][option])
            self.lhs[m.col_rows[c]] += m.col_vals[c]
            self.mass += int(m.masses[s])
        self.pos[s] = option

    def _floor_excess(self, mass: float | npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        threshold = self.shared.threshold
        if threshold is None:
            return np.zeros_like(np.asarray(mass, dtype=np.float64))
        return np.maximum(0.0, threshold - np.asarray(mass, dtype=np.float64)) / self.m.floor_scale

    def _active_columns(self) -> tuple[int, ...]:
        m = self.m
        return tuple(sorted(int(m.columns[s][p]) for s, p in enumerate(self.pos.tolist()) if p >= 0))

    def _exact_feasible(self, columns: tuple[int, ...]) -> bool:
        x = np.zeros(len(self.m.system.variables), dtype=np.bool_)
        x[list(columns)] = True
        threshold = self.shared.threshold
        return self.m.system.is_feasible(x) and (threshold is None or self.mass >= threshold)

    # --- moves ---------------------------------------------------------------

    def _relocations(self, s: int, step: int, raw: float, best_raw: float) -> _Move | None:
        m = self.m
        rows = m.rows[s]
        current = int(self.pos[s])
        base = self.lhs[rows]
        if current >= 0:
            base = base - m.sub[s][:, current]
        trial = np.concatenate([base[:, None] + m.sub[s], base[:, None]], axis=1)
        rhs = m.rhs[rows]
        old = np.maximum(0.0, self.lhs[rows] - rhs - TOLERANCE)
        new = np.maximum(0.0, trial - rhs[:, None] - TOLERANCE)
        change = new - old[:, None]
        d_weighted = self.weights[rows] @ change
        d_raw = change.sum(axis=0)

        placed = np.ones(trial.shape[1])
        placed[-1] = 0.0
        mass_after = self.mass + int(m.masses[s]) * (placed - (1.0 if current >= 0 else 0.0))
        floor_change = self._floor_excess(mass_after) - self._floor_excess(float(self.mass))
        d_weighted = d_weighted + self.floor_weight * floor_change
        d_raw = d_raw + floor_change

        d_weighted[current if current >= 0 else -1] = np.inf
        if self.tabu_until[s] > step:
            allowed = raw + d_raw < best_raw - TOLERANCE
            d_weighted = np.where(allowed, d_weighted, np.inf)
        best = float(d_weighted.min())
        if not math.isfinite(best):
            return None
        ties = np.flatnonzero(d_weighted <= best + 1e-12)
        pick = int(self.rng.choice(ties))
        option = -1 if pick == trial.shape[1] - 1 else pick
        return _Move(best, float(d_raw[pick]), s, option)

    def _swap(self, s: int, u: int, step: int, raw: float, best_raw: float) -> _Move | None:
        m = self.m
        ps, pu = int(self.pos[s]), int(self.pos[u])
        if ps == pu:
            return None
        changes: list[tuple[int, float]] = []
        if ps >= 0:
            changes += [(int(m.columns[s][ps]), -1.0), (int(m.columns[u][ps]), 1.0)]
        if pu >= 0:
            changes += [(int(m.columns[u][pu]), -1.0), (int(m.columns[s][pu]), 1.0)]
        rows = np.concatenate([m.col_rows[c] for c, _ in changes])
        vals = np.concatenate([m.col_vals[c] * sign for c, sign in changes])
        touched, inverse = np.unique(rows, return_inverse=True)
        delta = np.bincount(inverse, weights=vals, minlength=touched.size)
        before = np.maximum(0.0, self.lhs[touched] - m.rhs[touched] - TOLERANCE)
        after = np.maximum(0.0, self.lhs[touched] + delta - m.rhs[touched] - TOLERANCE)
        mass_after = self.mass
        if ps >= 0 > pu:
            mass_after += int(m.masses[u]) - int(m.masses[s])
        elif pu >= 0 > ps:
            mass_after += int(m.masses[s]) - int(m.masses[u])
        floor_change = float(self._floor_excess(float(mass_after)) - self._floor_excess(float(self.mass)))
        d_raw = float((after - before).sum()) + floor_change
        d_weighted = float(self.weights[touched] @ (after - before)) + self.floor_weight * floor_change
        if (self.tabu_until[s] > step or self.tabu_until[u] > step) and not raw + d_raw < best_raw - TOLERANCE:
            return None
        return _Move(d_weighted, d_raw, s, pu, partner=u)

    def _apply(self, move: _Move, step: int) -> None:
        if move.partner >= 0:
            ps = int(self.pos[move.slot])
            self._place(move.slot, -1)
            self._place(move.partner, ps)
            self._place(move.slot, move.option)
            self.tabu_until[move.partner] = step + self.tenure
        else:
            self._place(move.slot, move.option)
        self.tabu_until[move.slot] = step + self.tenure

    def _bump(self, excess: npt.NDArray[np.float64], floor: float) -> None:
        self.weights = 1.0 + (self.weights - 1.0) * WEIGHT_DECAY
        self.weights[excess > 0] += 1.0
        self.floor_weight = 1.0 + (self.floor_weight - 1.0) * WEIGHT_DECAY
        if floor > 0:
            self.floor_weight += 1.0

    # --- walk ----------------------------------------------------------------

    def segment(self) -> None:
        """One restart: greedy start, then search until stalled or stopped."""
        m = self.m
        shared = self.shared
        self._reset()
        since_gain = 0
        best_raw = math.inf
        step = 0
        while True:
            step += 1
            if step % CLOCK_STRIDE == 0:
                shared.count(CLOCK_STRIDE)
                if shared.done():
                    return
            elif shared.stop:
                return

            excess = np.maximum(0.0, self.lhs - m.rhs - TOLERANCE)
            floor = float(self._floor_excess(float(self.mass)))
            raw = float(excess.sum()) + floor
            if raw <= 0.0:
                columns = self._active_columns()
                if self._exact_feasible(columns) and shared.offer(self.mass, columns):
                    since_gain = 0
                    best_raw = math.inf
                    continue
            if m.n_slots == 0:
                shared.stop = True
                return
            best_raw = min(best_raw, raw)
            since_gain += 1
            if since_gain > self.stall_limit:
                return

            if self.rng.random() < NOISE or raw <= 0.0:
                s = int(self.rng.integers(m.n_slots))
                options = [o for o in range(-1, m.columns[s].size) if o != self.pos[s]]
                self._apply(_Move(0.0, 0.0, s, int(self.rng.choice(options))), step)
                continue

            sample = self.rng.choice(m.n_slots, size=min(SAMPLE_SIZE, m.n_slots), replace=False)
            moves: list[_Move] = []
            for s in sample.tolist():
                move = self._relocations(s, step, raw, best_raw)
                if move is not None:
                    moves.append(move)
            for s in sample[:SWAP_SAMPLE].tolist():
                peers = m.same_size[int(m.sizes[s])]
                if peers.size < 2:
                    continue
                u = int(self.rng.choice(peers))
                if u != s:
                    move = self._swap(s, u, step, raw, best_raw)
                    if move is not None:
                        moves.append(move)
            if not moves:
                continue
            best = min(mv.delta for mv in moves)
            if best >= -TOLERANCE:
                self._bump(excess, floor)
                continue
            ties = [mv for mv in moves if mv.delta <= best + 1e-12]
            self._apply(ties[int(self.rng.integers(len(ties)))], step)


def solve_threshold_descent(
    system: ConstraintSystem,
    payload: Payload,
    spec: AircraftSpec,
    config: SolveConfig | None = None,
) -> SolveReport:
    """Stochastic search under a mass floor raised after every feasible point.

    The initial floor is open (no floor until the first feasible point) or,
    with ``initial_threshold="warm"``, ceil(tau * W^max). The search stops
    once the mass reaches tau * W^max or the budget runs out. Against the
    null objective it stops at the first feasible point.

    Raises:
        SpecError: If the objective is neither the mass objective nor null
    """
    config = config or SolveConfig(mode="threshold_descent")
    check_alignment(system, set(payload.by_id))
    masses = system.variables.masses.tolist()
    null_objective = system.is_null_objective
    if not null_objective and any(c != -m for c, m in zip(system.objective, masses, strict=True)):
        raise SpecError("objective", "threshold descent supports the mass or the null objective")

    reference = config.reference(spec, payload)
    target = None if null_objective else mass_target(config.tau, reference)
    threshold: int | None = None
    if config.initial_threshold == "warm" and target is not None:
        threshold = math.ceil(target)

    start = time.perf_counter()
    shared = _Incumbent(threshold, config.threshold_step, target, start, start + config.time_budget)
    model = _FloatModel(system)
    assert config.seed is not None and config.threads is not None
    seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)
    walkers = [
        _Walker(model, np.random.Generator(np.random.PCG64(seed)), shared, config.stall_limit)
        for seed in seeds
    ]

    def drive(group: list[_Walker]) -> None:
        turn = 0
        while not shared.done():
            group[turn % len(group)].segment()
            turn += 1

    threads = min(config.threads, len(walkers))
    if threads == 1:
        drive(walkers)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(drive, walkers[t::threads]) for t in range(threads)]
            for future in futures:
                future.result()
    wall = time.perf_counter() - start

    status: SolveStatus
    incumbent = None
    if shared.best_columns is None:
        status = "no_solution_found"
    else:
        incumbent = Assignment.from_pairs(system.variables.pair(c) for c in shared.best_columns)
        status = "tau_reached" if target is None or shared.best_mass >= target else "budget_exhausted"
    logger.info(
        "Threshold descent: %s, mass %d after %d steps in %.3fs",
        status,
        max(shared.best_mass, 0),
        shared.iterations,
        wall,
    )
    return SolveReport(
        status=status,
        incumbent=incumbent,
        trace=tuple(shared.trace),
        n_l=count_nonzeros(system),
        wall_time=wall,
        mode="threshold_descent",
        iterations=shared.iterations,
    )

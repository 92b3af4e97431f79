"""Scaling benchmark grid: generate, build, solve and time instances per (r, N) cell."""

from __future__ import annotations

import logging
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
import polars as pl

from alopt.data.generator import GeneratorConfig, generate_masses, split_sizes
from alopt.data.reference import reference_aircraft
from alopt.exceptions import SpecError
from alopt.model.constraints import build_constraints, count_nonzeros
from alopt.settings import resolve_seed, resolve_threads
from alopt.solver import SolveConfig, solve, w_max
from alopt.types import SolveStatus

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("r", "n", "N", "seed", "n_l", "status", "time_s", "mass", "w_max")
CSV_SCHEMA: dict[str, pl.DataType] = {
    "r": pl.Float64(),
    "n": pl.Int64(),
    "N": pl.Int64(),
    "seed": pl.Int64(),
    "n_l": pl.Int64(),
    "status": pl.String(),
    "time_s": pl.Float64(),
    "mass": pl.Int64(),
    "w_max": pl.Int64(),
}
SEED_MASK = (1 << 63) - 1


@dataclass(frozen=True, slots=True)
class BenchRecord:
    """One solved instance. ``time_s`` is set only for tau_reached records."""

    r: float
    n: int
    N: int
    seed: int
    n_l: int
    status: SolveStatus
    time_s: float | None
    mass: int
    w_max: int


@dataclass(frozen=True)
class BenchConfig:
    """Grid definition; solver settings come from ``solve``."""

    DEFAULT_COUNT = 10
    DEFAULT_TAU = 0.999

    r_values: tuple[float, ...]
    bin_counts: tuple[int, ...]
    count: int = DEFAULT_COUNT
    tau: float = DEFAULT_TAU
    solve: SolveConfig = field(default_factory=lambda: SolveConfig(mode="threshold_descent", threads=1))
    base_seed: int | None = None
    threads: int | None = None

    def __post_init__(self) -> None:
        if not self.r_values or not self.bin_counts:
            raise SpecError("grid", "need at least one r value and one bin count")
        if any(r <= 0 for r in self.r_values):
            raise SpecError("r_values", "ratios must be positive")
        if any(n < 2 for n in self.bin_counts):
            raise SpecError("bin_counts", "need at least 2 bins per aircraft")
        if self.count < 1:
            raise SpecError("count", f"must be >= 1, got {self.count}")
        if not 0 <= self.tau <= 1:
            raise SpecError("tau", f"must lie in [0, 1], got {self.tau}")
        object.__setattr__(self, "base_seed", resolve_seed(self.base_seed))
        object.__setattr__(self, "threads", resolve_threads(self.threads))


def cell_size(r: float, bin_count: int) -> int:
    """Container count n = r * N, rounded half away from zero, at least 1."""
    return max(1, int(np.floor(r * bin_count + 0.5)))


def instance_seed(base_seed: int, r_index: int, bin_count: int, i: int) -> int:
    state = np.random.SeedSequence([base_seed, r_index, bin_count, i]).generate_state(1, np.uint64)
    return int(state[0]) & SEED_MASK


def run_instance(r: float, bin_count: int, seed: int, tau: float, solve_config: SolveConfig) -> BenchRecord:
    """Generate, build and solve one instance; only the solve call is timed."""
    n = cell_size(r, bin_count)
    n1, n2, n3 = split_sizes(n)
    spec = reference_aircraft(bin_count)
    payload = generate_masses(GeneratorConfig(n1, n2, n3, bin_count, seed=seed))
    system = build_constraints(spec, payload)
    config = replace(solve_config, tau=tau, seed=seed)

    start = time.perf_counter()
    report = solve(system, payload, spec, config)
    elapsed = time.perf_counter() - start

    return BenchRecord(
        r=round(r, 3),
        n=n,
        N=bin_count,
        seed=seed,
        n_l=count_nonzeros(system),
        status=report.status,
        time_s=elapsed if report.status == "tau_reached" else None,
        mass=report.mass if report.incumbent is not None else 0,
        w_max=w_max(spec, payload),
    )


def run_grid(config: BenchConfig) -> list[BenchRecord]:
    """Solve ``count`` instances per (r, N) cell.

    Instances run in a worker pool capped by ``config.threads``; the result
    is sorted by (r, N, instance index) whatever the completion order.
    Budget exhaustion is recorded in the status, never raised.
    """
    assert config.base_seed is not None
    jobs: list[tuple[tuple[int, int, int], float, int, int]] = []
    for r_index, r in enumerate(config.r_values):
        for bin_count in config.bin_counts:
            for i in range(config.count):
                seed = instance_seed(config.base_seed, r_index, bin_count, i)
                jobs.append(((r_index, bin_count, i), r, bin_count, seed))

    def work(job: tuple[tuple[int, int, int], float, int, int]) -> tuple[tuple[int, int, int], BenchRecord]:
        key, r, bin_count, seed = job
        record = run_instance(r, bin_count, seed, config.tau, config.solve)
        logger.info(
            "r=%.3f N=%d #%d: %s mass=%d/%d n_l=%d",
            r,
            bin_count,
            key[2],
            record.status,
            record.mass,
            record.w_max,
            record.n_l,
        )
        return key, record

    if config.threads == 1:
        results = [work(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(work, jobs))
    return [record for _, record in sorted(results, key=lambda item: item[0])]


def records_frame(records: Sequence[BenchRecord]) -> pl.DataFrame:
    """Records as a DataFrame in CSV column order."""
    rows = [asdict(record) for record in records]
    return pl.DataFrame(rows, schema=CSV_SCHEMA, orient="row") if rows else pl.DataFrame(schema=CSV_SCHEMA)


def records_from_frame(frame: pl.DataFrame) -> list[BenchRecord]:
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise SpecError("bench csv", f"missing columns {missing}")
    return [BenchRecord(**row) for row in frame.select(CSV_COLUMNS).iter_rows(named=True)]


def aggregate(records: Sequence[BenchRecord], budget: float | None = None) -> pl.DataFrame:
    """Per-cell means over tau_reached records; the rest are counted as censored.

    ``budget`` is the per-instance time budget the censored records ran into.
    """
    frame = records_frame(records)
    solved = pl.col("status") == "tau_reached"
    return (
        frame.group_by(["r", "N"], maintain_order=True)
        .agg(
            pl.col("n").first(),
            pl.col("n_l").mean().alias("mean_n_l"),
            pl.col("time_s").filter(solved).mean().alias("mean_time_s"),
            solved.sum().alias("solved"),
            (~solved).sum().alias("censored"),
            pl.col("mass").mean().alias("mean_mass"),
        )
        .with_columns(pl.lit(budget, dtype=pl.Float64).alias("budget_s"))
        .sort(["r", "N"])
    )

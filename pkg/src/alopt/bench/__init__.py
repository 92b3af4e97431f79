"""Scaling benchmarks: instance grids, power-law fits and reports.

Example:
    ```python
    from alopt.bench import BenchConfig, emit_report, fit_all, run_grid

    records = run_grid(BenchConfig(r_values=(1.0,), bin_counts=(10, 14, 20, 28), count=5))
    fits = {r: fit for r, fit in fit_all(records).items() if not isinstance(fit, Exception)}
    emit_report(records, fits, "out/bench", reference=True)
    ```
"""

from alopt.bench.harness import (
    CSV_COLUMNS,
    BenchConfig,
    BenchRecord,
    aggregate,
    cell_size,
    instance_seed,
    records_frame,
    records_from_frame,
    run_grid,
    run_instance,
)
from alopt.bench.report import (
    ReportFiles,
    emit_report,
    plot_time_vs_bins,
    plot_time_vs_nonzeros,
    read_records,
    write_records,
)
from alopt.bench.scaling import (
    LinearFit,
    ScalingFit,
    fit_all,
    fit_nonzeros,
    fit_scaling,
    reference_time,
    reference_valid,
)

__all__ = [
    # Harness
    "CSV_COLUMNS",
    "BenchConfig",
    "BenchRecord",
    "aggregate",
    "cell_size",
    "instance_seed",
    "records_frame",
    "records_from_frame",
    "run_grid",
    "run_instance",
    # Fits
    "LinearFit",
    "ScalingFit",
    "fit_all",
    "fit_nonzeros",
    "fit_scaling",
    "reference_time",
    "reference_valid",
    # Output
    "ReportFiles",
    "emit_report",
    "plot_time_vs_bins",
    "plot_time_vs_nonzeros",
    "read_records",
    "write_records",
]

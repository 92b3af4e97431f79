"""Bench CSV, summary tables and SVG plots."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from alopt.bench.harness import CSV_SCHEMA, BenchRecord, aggregate, records_frame, records_from_frame
from alopt.bench.scaling import ReferenceVariant, ScalingFit, fit_nonzeros, reference_time, reference_valid
from alopt.exceptions import FitError, SpecError, StorageError
from alopt.storage.files import read_csv, write_csv, write_json

if TYPE_CHECKING:
    from matplotlib.figure import Figure

logger = logging.getLogger(__name__)

RECORDS_FILE = "bench.csv"
SUMMARY_FILE = "summary.csv"
FITS_FILE = "fits.json"
TIME_VS_BINS_FILE = "time_vs_N.svg"
TIME_VS_NONZEROS_FILE = "time_vs_nl.svg"
SVG_HASH_SALT = "alopt"


@dataclass(frozen=True, slots=True)
class ReportFiles:
    records: Path
    summary: Path
    fits: Path
    time_vs_bins: Path
    time_vs_nonzeros: Path


def _pyplot() -> Any:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def write_records(path: str | Path, records: Sequence[BenchRecord]) -> Path:
    return write_csv(path, records_frame(records))


def read_records(path: str | Path) -> list[BenchRecord]:
    return records_from_frame(read_csv(path, schema=CSV_SCHEMA))


def _solved(records: Sequence[BenchRecord]) -> list[BenchRecord]:
    return [rec for rec in records if rec.status == "tau_reached" and rec.time_s is not None]


def plot_time_vs_bins(records: Sequence[BenchRecord]) -> Figure:
    """Mean time-to-target against N, one line per ratio r."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    summary = aggregate(records).drop_nulls("mean_time_s")
    for r in sorted(set(summary["r"].to_list())):
        cell = summary.filter(summary["r"] == r)
        ax.plot(cell["N"].to_list(), cell["mean_time_s"].to_list(), marker="o", label=f"r = {r:g}")
    ax.set_xlabel("N (bins)")
    ax.set_ylabel("mean time to target (s)")
    ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    if len(summary):
        ax.legend()
    fig.tight_layout()
    return fig


def plot_time_vs_nonzeros(
    records: Sequence[BenchRecord],
    fits: Mapping[float, ScalingFit],
    *,
    reference: bool = False,
    variant: ReferenceVariant = "mass",
) -> Figure:
    """Log-log scatter of time against n_l with fitted lines.

    With ``reference`` the published law is overlaid as a dashed curve for
    each ratio inside its validity range.
    """
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    solved = _solved(records)
    ratios = sorted({rec.r for rec in solved} | set(fits))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]

    for i, r in enumerate(ratios):
        color = colors[i % len(colors)]
        points = [rec for rec in solved if rec.r == r]
        if points:
            ax.scatter([p.n_l for p in points], [p.time_s for p in points], s=12, color=color, label=f"r = {r:g}")
        n_ls = [p.n_l for p in points]
        if r in fits:
            fit = fits[r]
            grid = np.geomspace(min(n_ls), max(n_ls), 50) if n_ls else np.geomspace(1e2, 1e5, 50)
            ax.plot(grid, [fit.predict(v) for v in grid], color=color, linewidth=1.2)
        if reference and reference_valid(r):
            grid = np.geomspace(min(n_ls), max(n_ls), 50) if n_ls else np.geomspace(1e2, 1e5, 50)
            ax.plot(
                grid,
                [reference_time(v, r, variant) for v in grid],
                color=color,
                linestyle="--",
                linewidth=1.0,
                label=f"reference law r = {r:g}",
            )

    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n_l (nonzero coefficients)")
    ax.set_ylabel("time to target (s)")
    ax.grid(True, which="both", alpha=0.3)
    if ratios:
        ax.legend(fontsize="small")
    fig.tight_layout()
    return fig


def _save(fig: Figure, path: Path) -> Path:
    plt = _pyplot()
    temp = path.with_name(path.name + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        # Fixed salt and no Date metadata keep reruns byte-identical.
        with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
            fig.savefig(temp, format="svg", metadata={"Date": None})
        temp.replace(path)
    except OSError as e:
        raise StorageError("savefig", str(path), e) from e
    finally:
        plt.close(fig)
    return path


def _fits_document(
    records: Sequence[BenchRecord],
    fits: Mapping[float, ScalingFit],
    reference: bool,
    variant: ReferenceVariant,
) -> dict[str, Any]:
    document: dict[str, Any] = {
        "fits": [fits[r].to_dict() for r in sorted(fits)],
        "reference": {"enabled": reference, "variant": variant} if reference else {"enabled": False},
    }
    try:
        nonzeros = fit_nonzeros(records)
        document["nonzeros_fit"] = {
            "slope": nonzeros.slope,
            "intercept": nonzeros.intercept,
            "r_squared": nonzeros.r_squared,
            "points": nonzeros.points,
        }
    except FitError as e:
        logger.info("Skipping n_l vs n*N^2 fit: %s", e)
        document["nonzeros_fit"] = None
    return document


def emit_report(
    records: Sequence[BenchRecord],
    fits: Mapping[float, ScalingFit],
    out_dir: str | Path,
    *,
    reference: bool = False,
    variant: ReferenceVariant = "mass",
    budget: float | None = None,
) -> ReportFiles:
    """Write the records CSV, per-cell summary, fit report and both plots.

    Raises:
        SpecError: No records.
        StorageError: ``out_dir`` is not writable.
    """
    if not records:
        raise SpecError("records", "nothing to report")
    out = Path(out_dir).expanduser()
    files = ReportFiles(
        records=write_records(out / RECORDS_FILE, records),
        summary=write_csv(out / SUMMARY_FILE, aggregate(records, budget)),
        fits=write_json(out / FITS_FILE, _fits_document(records, fits, reference, variant)),
        time_vs_bins=_save(plot_time_vs_bins(records), out / TIME_VS_BINS_FILE),
        time_vs_nonzeros=_save(
            plot_time_vs_nonzeros(records, fits, reference=reference, variant=variant),
            out / TIME_VS_NONZEROS_FILE,
        ),
    )
    logger.info("Wrote bench report for %d records to %s", len(records), out)
    return files

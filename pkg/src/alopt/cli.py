"""Command-line entry point.

Every subcommand writes its artifacts to files, logs to stderr and prints
one JSON summary line on stdout. Exit codes:

    0  success (feasible, target reached)
    1  quality or feasibility not reached
    2  usage or invalid input values
    3  file or document errors
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from alopt.bench import BenchConfig, emit_report, fit_all, read_records, run_grid
from alopt.bench.scaling import ScalingFit
from alopt.cgopt import CgOptConfig, CgOptReport, CgStage, optimize_cg
from alopt.data import (
    GeneratorConfig,
    airbus_reference_instance,
    generate_instance,
    split_sizes,
)
from alopt.exceptions import ALOError, DocumentError, StorageError
from alopt.model import build_constraints, count_nonzeros, simulate_packing, validate
from alopt.solver import SolveConfig, solve
from alopt.storage import (
    instance_digest,
    load_solution,
    read_instance,
    read_json,
    save_mps,
    save_solution,
    save_system,
    write_instance,
    write_json,
)
from alopt.types import Assignment

logger = logging.getLogger("alopt")

EXIT_OK = 0
EXIT_NOT_REACHED = 1
EXIT_USAGE = 2
EXIT_IO = 3

Command = Callable[[argparse.Namespace], int]


def _emit(summary: dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
    sys.stdout.flush()


def _float(value: Fraction | None) -> float | None:
    return None if value is None else float(value)


def _solve_config(args: argparse.Namespace, **overrides: Any) -> SolveConfig:
    settings: dict[str, Any] = {
        "mode": args.mode,
        "time_budget": args.budget,
        "seed": args.seed,
        "threads": args.threads,
        "restarts": args.restarts,
    }
    settings.update(overrides)
    return SolveConfig(**settings)


# --- generate ----------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    if args.reference:
        instance = airbus_reference_instance()
    else:
        n1, n2, n3 = split_sizes(args.n) if args.n is not None else tuple(args.counts)
        instance = generate_instance(GeneratorConfig(n1, n2, n3, args.bins, seed=args.seed))

    path = write_instance(args.out, instance)
    counts = instance.payload.size_counts
    _emit(
        {
            "command": "generate",
            "path": str(path),
            "n": len(instance.payload),
            "N": instance.spec.bin_count,
            "split": list(counts),
            "total_mass": instance.payload.total_mass,
            "w_max": instance.w_max_cap,
            "seed": instance.provenance.seed,
        }
    )
    return EXIT_OK


# --- export ------------------------------------------------------------------


def cmd_export(args: argparse.Namespace) -> int:
    instance = read_instance(args.instance)
    system = build_constraints(instance.spec, instance.payload)
    if args.format == "mps":
        path = save_mps(args.out, system, name=Path(args.instance).stem.upper() or "ALOPT")
    else:
        path = write_json(args.out, save_system(system))
    rows, variables = system.shape
    _emit(
        {
            "command": "export",
            "format": args.format,
            "path": str(path),
            "rows": rows,
            "vars": variables,
            "n_l": count_nonzeros(system),
        }
    )
    return EXIT_OK


# --- solve -------------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    instance = read_instance(args.instance)
    system = build_constraints(instance.spec, instance.payload)
    config = _solve_config(
        args,
        tau=args.tau,
        initial_threshold="warm" if args.warm else "open",
        reference_mass=args.reference_mass,
    )
    report = solve(system, instance.payload, instance.spec, config)

    assignment = report.incumbent if report.incumbent is not None else Assignment.empty()
    document = save_solution(
        instance,
        assignment,
        status=report.status,
        trace=[(p.time, p.mass) for p in report.trace],
        n_l=report.n_l,
        wall_time=report.wall_time,
        instance_path=str(args.instance),
        extra={"mode": report.mode, "tau": args.tau, "w_max": config.reference(instance.spec, instance.payload)},
    )
    path = write_json(args.out, document)
    _emit(
        {
            "command": "solve",
            "path": str(path),
            "mode": report.mode,
            "status": report.status,
            "mass": report.mass,
            "w_max": config.reference(instance.spec, instance.payload),
            "n_l": report.n_l,
            "wall_time": round(report.wall_time, 6),
        }
    )
    return EXIT_OK if report.reached else EXIT_NOT_REACHED


# --- optimize-cg -------------------------------------------------------------


def _stage_document(stage: CgStage) -> dict[str, Any]:
    return {
        "index": stage.index,
        "feasible": stage.feasible,
        "solver_status": stage.solver_status,
        "window": None if stage.window is None else [float(stage.window[0]), float(stage.window[1])],
        "bound": _float(stage.bound),
        "cg": _float(stage.cg),
        "deviation": _float(stage.deviation),
        "mass": stage.mass,
    }


def _cg_document(report: CgOptReport, config: CgOptConfig) -> dict[str, Any]:
    return {
        "status": report.status,
        "method": report.method,
        "tau": config.tau,
        "epsilon": config.epsilon,
        "w_max": report.w_max,
        "deviation": _float(report.deviation),
        "stages": [_stage_document(s) for s in report.stages],
    }


def cmd_optimize_cg(args: argparse.Namespace) -> int:
    instance = read_instance(args.instance)
    config = CgOptConfig(
        tau=args.tau,
        epsilon=args.epsilon,
        max_stages=args.max_stages,
        method=args.method,
        w_max_mode=args.w_max,
        stage_budget=args.stage_budget,
        initial_bound=args.initial_bound,
    )
    report = optimize_cg(instance, config, _solve_config(args))

    assignment = report.assignment if report.assignment is not None else Assignment.empty()
    document = save_solution(
        instance,
        assignment,
        status=report.status,
        instance_path=str(args.instance),
        extra={"cgopt": _cg_document(report, config)},
    )
    path = write_json(args.out, document)
    _emit(
        {
            "command": "optimize-cg",
            "path": str(path),
            "method": report.method,
            "status": report.status,
            "mass": report.mass,
            "w_max": report.w_max,
            "cg": _float(report.cg),
            "deviation": _float(report.deviation),
            "stages": len(report.stages),
        }
    )
    return EXIT_NOT_REACHED if report.assignment is None else EXIT_OK


# --- validate ----------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    instance = read_instance(args.instance)
    solution = load_solution(read_json(args.solution))
    if solution.digest != instance_digest(instance):
        raise DocumentError("instance.digest", "solution belongs to a different instance")

    report = validate(solution.assignment, instance.spec, instance.payload)
    packing = simulate_packing(solution.assignment, instance.spec, instance.payload)
    for violation in report.violations:
        logger.info("violated %s[%d]: lhs=%s rhs=%s", violation.tag, violation.index, violation.lhs, violation.rhs)
    mass = -report.objective
    if mass != solution.mass:
        logger.warning("Solution file claims mass %d, assignment carries %d", solution.mass, mass)
    _emit(
        {
            "command": "validate",
            "feasible": report.feasible,
            "violations": len(report.violations),
            "packing_ok": packing.ok,
            "mass": mass,
            "status": solution.status,
        }
    )
    return EXIT_OK if report.feasible else EXIT_NOT_REACHED


# --- bench / report ----------------------------------------------------------


def _fits(records: Sequence[Any]) -> dict[float, ScalingFit]:
    fits: dict[float, ScalingFit] = {}
    for r, fit in fit_all(records).items():
        if isinstance(fit, ScalingFit):
            fits[r] = fit
        else:
            logger.warning("No scaling fit for r=%g: %s", r, fit)
    return fits


def cmd_bench(args: argparse.Namespace) -> int:
    config = BenchConfig(
        r_values=tuple(args.r),
        bin_counts=tuple(args.N_list),
        count=args.count,
        tau=args.tau,
        solve=_solve_config(args, threads=1),
        base_seed=args.seed,
        threads=args.threads,
    )
    records = run_grid(config)
    fits = _fits(records)
    files = emit_report(records, fits, args.out, reference=args.ref_law, variant=args.variant, budget=args.budget)
    _emit(
        {
            "command": "bench",
            "csv": str(files.records),
            "records": len(records),
            "solved": sum(1 for rec in records if rec.status == "tau_reached"),
            "fits": {f"{r:g}": round(fit.exponent, 6) for r, fit in fits.items()},
        }
    )
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    records = read_records(args.csv)
    fits = _fits(records)
    files = emit_report(records, fits, args.out, reference=args.ref_law, variant=args.variant)
    _emit(
        {
            "command": "report",
            "records": len(records),
            "plots": [str(files.time_vs_bins), str(files.time_vs_nonzeros)],
            "fits": {f"{r:g}": round(fit.exponent, 6) for r, fit in fits.items()},
        }
    )
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _solver_flags(parser: argparse.ArgumentParser, budget: float = SolveConfig.DEFAULT_TIME_BUDGET) -> None:
    parser.add_argument(
        "--mode",
        choices=["exhaustive", "branch_and_bound", "threshold_descent"],
        default="threshold_descent",
    )
    parser.add_argument("--budget", type=float, default=budget, help="time budget per solve (s)")
    parser.add_argument("--restarts", type=int, default=SolveConfig.DEFAULT_RESTARTS)


def _run_flags(parser: argparse.ArgumentParser, default: Any) -> None:
    parser.add_argument("--seed", type=int, default=default, help="default seed (else ALOPT_SEED)")
    parser.add_argument("--threads", type=int, default=default, help="worker cap (else ALOPT_THREADS)")


def _check_generate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if args.reference and args.bins is not None:
        parser.error("generate: --reference fixes N=20; drop -N")
    if not args.reference and args.bins is None:
        parser.error("generate: -N is required with -n or --counts")


def _report_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--ref-eq12", "--ref-law", dest="ref_law", action="store_true", help="overlay the reference scaling law"
    )
    parser.add_argument("--variant", choices=["mass", "cg"], default="mass")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alopt", description="Aircraft loading optimization")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    _run_flags(parser, default=None)
    # accepted after the subcommand too; SUPPRESS keeps a global value when omitted there
    shared = argparse.ArgumentParser(add_help=False)
    _run_flags(shared, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[shared], help="write an instance file")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--reference", action="store_true", help="the 30-container sample data set")
    source.add_argument("-n", type=int, help="container count, split n/2, n/3, n/6")
    source.add_argument("--counts", type=int, nargs=3, metavar=("N1", "N2", "N3"))
    p.add_argument("-N", "--bins", type=int, default=None)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_generate, check=_check_generate)

    p = sub.add_parser("export", parents=[shared], help="write the constraint system")
    p.add_argument("instance")
    p.add_argument("--format", choices=["mps", "json"], default="mps")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("solve", parents=[shared], help="maximize carried mass")
    p.add_argument("instance")
    p.add_argument("--tau", type=float, default=SolveConfig.DEFAULT_TAU)
    p.add_argument("--warm", action="store_true", help="start the threshold at tau * W^max")
    p.add_argument("--reference-mass", type=int, default=None, help="known optimum used as W^max")
    _solver_flags(p)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("optimize-cg", parents=[shared], help="move the center of gravity toward the target")
    p.add_argument("instance")
    p.add_argument("--tau", type=float, default=CgOptConfig.DEFAULT_TAU)
    p.add_argument("--epsilon", type=float, default=CgOptConfig.DEFAULT_EPSILON)
    p.add_argument("--method", choices=["sequence", "direct"], default="sequence")
    p.add_argument("--max-stages", type=int, default=CgOptConfig.DEFAULT_MAX_STAGES)
    p.add_argument("--stage-budget", type=float, default=None)
    p.add_argument("--w-max", choices=["solve", "cap"], default="solve")
    p.add_argument("--initial-bound", type=float, default=None, help="first distance bound b (direct)")
    _solver_flags(p)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_optimize_cg)

    p = sub.add_parser("validate", parents=[shared], help="re-check a solution file")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", parents=[shared], help="run a scaling grid")
    p.add_argument("--r", type=float, nargs="+", required=True)
    p.add_argument("--N-list", dest="N_list", type=int, nargs="+", required=True)
    p.add_argument("--count", type=int, default=BenchConfig.DEFAULT_COUNT)
    p.add_argument("--tau", type=float, default=BenchConfig.DEFAULT_TAU)
    _solver_flags(p, budget=SolveConfig.DEFAULT_TIME_BUDGET)
    _report_flags(p)
    p.add_argument("-o", "--out", default="bench")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", parents=[shared], help="re-render fits and plots from a bench CSV")
    p.add_argument("csv")
    _report_flags(p)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("alopt")
    root.handlers[:] = [handler]
    root.setLevel(level)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        check: Callable[[argparse.ArgumentParser, argparse.Namespace], None] | None = getattr(args, "check", None)
        if check is not None:
            check(parser, args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    _configure_logging(args.verbose)

    func: Command = args.func
    try:
        return func(args)
    except (DocumentError, StorageError) as e:
        logger.error("%s", e)
        return EXIT_IO
    except ALOError as e:
        logger.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: solve, run, sweep, and report subcommands."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bench import (
    METHODS,
    SWEEP_AXES,
    ExperimentConfig,
    StageError,
    emit_sweep_tables,
    emit_tables,
    read_records,
    run_experiment,
    run_sweep,
)
from .lp import LpError, read_lp
from .simplex import solve


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", default="base", help="hub preset name (default: base)")
    p.add_argument("--fixture", help="LP fixture path instead of a hub preset")
    p.add_argument("--methods", default=",".join(METHODS),
                   help="comma-separated subset of: " + ",".join(METHODS))
    p.add_argument("--seed", type=int, default=13, help="master seed")
    p.add_argument("--nk", type=int, default=200, help="number of objectives")
    p.add_argument("--nd", type=int, default=None, help="number of interest variables")
    p.add_argument("--epsilon", type=float, default=0.05, help="cost slack fraction")
    p.add_argument("--rd-variant", default="symmetric", choices=("symmetric", "positive"))
    p.add_argument("--no-intermediaries", action="store_true",
                   help="record only optima, not traversed vertices")
    p.add_argument("--no-cross-checks", action="store_true",
                   help="do not check other objectives at intermediate vertices")
    p.add_argument("--no-warm-start", action="store_true",
                   help="restart each objective from the shared feasible basis")
    p.add_argument("--unscaled", action="store_true",
                   help="skip characteristic-scale normalization of objectives")
    p.add_argument("--planar", type=int, default=None, metavar="K",
                   help="also compute planar reference outlines with K directions")
    p.add_argument("--config", help="JSON file with ExperimentConfig fields (overrides flags)")
    p.add_argument("--out", default="out", help="output directory")


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            return ExperimentConfig.from_dict(json.load(fh))
    return ExperimentConfig(
        preset=args.preset,
        fixture=args.fixture,
        methods=tuple(m.strip() for m in args.methods.split(",") if m.strip()),
        epsilon=args.epsilon,
        n_objectives=args.nk,
        n_interest=args.nd,
        master_seed=args.seed,
        record_intermediaries=not args.no_intermediaries,
        check_all_objectives=not args.no_cross_checks,
        warm_start=not args.no_warm_start,
        scale_objectives=not args.unscaled,
        rd_variant=args.rd_variant,
        planar_directions=args.planar,
    )


def _cmd_solve(args) -> int:
    lp = read_lp(args.fixture)
    result = solve(lp)
    print(f"status: {result.status}")
    if result.status == "optimal":
        print(f"objective: {result.objective_value:.10g}")
        print(f"phase2 pivots: {result.phase2_pivots}")
        nonzero = [
            (lp.column_names[j], result.vertex[j])
            for j in range(lp.n)
            if abs(result.vertex[j]) > 1e-9
        ]
        for name, value in nonzero:
            print(f"  {name} = {value:.10g}")
    return 0 if result.status == "optimal" else 1


def _cmd_run(args) -> int:
    config = _config_from_args(args)
    record = run_experiment(config)
    files = emit_tables([record], args.out)
    _print_summary(record)
    print(f"wrote {len(files)} file(s) under {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    config = _config_from_args(args)
    grid = None
    if args.grid:
        grid = [int(v) for v in args.grid.split(",")]
    sweep = run_sweep(config, args.axis.replace("-", "_"), grid)
    files = emit_sweep_tables(sweep, args.out)
    for value, rec in zip(sweep.grid, sweep.records):
        pivots = {m: r.pivots for m, r in rec.methods.items()}
        print(f"{sweep.axis}={value}: pivots={pivots}")
    if sweep.slopes:
        print("log-log pivot slopes:", {k: round(v, 3) for k, v in sweep.slopes.items()})
    print(f"wrote {len(files)} file(s) under {args.out}")
    return 0


def _cmd_report(args) -> int:
    records = read_records(args.records)
    files = emit_tables(records, args.out)
    for rec in records:
        _print_summary(rec)
    print(f"wrote {len(files)} file(s) under {args.out}")
    return 0


def _print_summary(record) -> None:
    print(f"model: {record.n_columns} columns x {record.n_rows} rows, "
          f"f_min={record.f_min:.6g}, budget={record.budget_limit:.6g}")
    for name, m in record.methods.items():
        gain = f", efficiency_gain={m.efficiency_gain:.2f}" if m.efficiency_gain else ""
        vol = f", normalized_volume={m.normalized_volume:.3f}" if m.normalized_volume else ""
        print(f"  {name}: pivots={m.pivots}, vertices={m.n_vertices}{vol}{gain}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="funplex",
        description="Near-optimal LP space exploration benchmark runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a single LP fixture")
    p_solve.add_argument("fixture")
    p_solve.set_defaults(func=_cmd_solve)

    p_run = sub.add_parser("run", help="run one experiment")
    _add_experiment_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a scalability sweep")
    p_sweep.add_argument("--axis", required=True,
                         choices=[a.replace("_", "-") for a in SWEEP_AXES] + list(SWEEP_AXES))
    p_sweep.add_argument("--grid", help="comma-separated grid values")
    _add_experiment_flags(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_report = sub.add_parser("report", help="re-emit tables from stored records")
    p_report.add_argument("--records", required=True, help="records.jsonl path")
    p_report.add_argument("--out", default="out", help="output directory")
    p_report.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"error {exc}", file=sys.stderr)
        return 1
    except (LpError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

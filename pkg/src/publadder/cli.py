"""Command-line entry point.

Subcommands write CSV (or JSON) result files plus a ``manifest.json`` into
``--out``. ``--workers`` only changes speed; every number is fixed by the
seed.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import datetime as _dt
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import calibration_table
from .config_io import ConfigError, config_to_dict, parse_config
from .model import Tier, default_baseline_config
from .scenarios import run_load_sweep, run_portfolio, run_single_tier_cohort, run_sua_cohort

PORTFOLIO_COLUMNS = [
    "group", "n", "mean_all", "median_all", "sd_all", "mean_t1", "median_t1", "sd_t1",
    "total_accepted", "total_t1", "total_desk_rejections",
]
FACULTY_COLUMNS = [
    "faculty_id", "is_adopter", "generated", "accepted_total", "accepted_t1", "accepted_t2",
    "accepted_t3", "desk_rejections", "censored",
]


def _fmt(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, float):
        return f"{value:.6f}"
    return value


class _Writer:
    def __init__(self, out: Path, fmt: str):
        self.out = out
        self.fmt = fmt
        self.paths: list[str] = []
        out.mkdir(parents=True, exist_ok=True)

    def table(self, stem: str, columns: list[str], rows: list[list]) -> None:
        if self.fmt == "json":
            path = self.out / f"{stem}.json"
            records = [dict(zip(columns, (_fmt(v) for v in row))) for row in rows]
            path.write_text(json.dumps(records, indent=2) + "\n", encoding="utf-8")
        else:
            path = self.out / f"{stem}.csv"
            with path.open("w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(columns)
                for row in rows:
                    w.writerow([_fmt(v) for v in row])
        self.paths.append(str(path))


def _stat_row(summary):
    a, t = summary.accepted, summary.accepted_t1
    return [
        summary.group, summary.faculty_count, a.mean, a.median, a.sd, t.mean, t.median, t.sd,
        summary.total_accepted, summary.total_accepted_t1, summary.total_desk_rejections,
    ]


def _write_cohort(writer: _Writer, stem: str, summary) -> None:
    rows = [["submitted", summary.n_submitted], ["accepted", summary.n_accepted]]
    rows += [[f"accepted_{t.name}", summary.n_accepted_by_tier[t]] for t in Tier]
    rows += [
        ["desk_rejected", summary.n_desk_failed],
        ["review_rejected", summary.n_review_failed],
        ["censored", summary.n_censored],
    ]
    writer.table(f"{stem}_summary", ["status", "count"], rows)
    tta = summary.time_to_acceptance
    stats = [["acceptance_rate", summary.acceptance_rate]]
    if not tta.empty:
        stats += [["median_months", tta.median], ["mean_months", tta.mean], ["sd_months", tta.sd]]
    writer.table(f"{stem}_time_stats", ["metric", "value"], stats)
    writer.table(
        f"{stem}_histogram",
        ["bin_lower_months", "count"],
        [[float(lo), c] for lo, c in summary.elapsed_histogram.bins],
    )


def _loads(text: str) -> list[float]:
    try:
        loads = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid load list {text!r}") from None
    if not loads or any(not (x >= 1) for x in loads):
        raise argparse.ArgumentTypeError("loads must be numbers >= 1")
    return loads


def _seed(text: str):
    if text == "random":
        return "random"
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer or 'random', got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed out of unsigned 64-bit range")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON scenario config; absent keys take baseline values")
    common.add_argument("--seed", type=_seed, help="master seed (u64) or 'random'; defaults to the config seed")
    common.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    common.add_argument("--workers", type=_positive_int, default=1, help="worker processes (speed only)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="publadder", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", parents=[common], help="desk rates and acceptance algebra per load")
    p.add_argument("--loads", type=_loads, default=[1.0, 2.0, 3.0, 5.0, 10.0])
    p = sub.add_parser("cohort", parents=[common], help="single-journal cohort at one tier")
    p.add_argument("--tier", choices=("T1", "T2", "T3"), default="T1")
    p.add_argument("--n", type=_positive_int, default=10_000)
    p = sub.add_parser("sua", parents=[common], help="submit-until-acceptance cohort")
    p.add_argument("--n", type=_positive_int, default=10_000)
    sub.add_parser("portfolio", parents=[common], help="faculty portfolios over the tenure horizon")
    p = sub.add_parser("sweep", parents=[common], help="portfolio means across external loads")
    p.add_argument("--loads", type=_loads, default=[1.0, 2.0, 3.0, 5.0, 10.0])
    sub.add_parser("validate", parents=[common], help="run the acceptance checks")
    return parser


def _run(args, config, seed, writer: _Writer) -> int:
    if args.command == "calibrate":
        rows = [
            [r.tier.name, float(r.load), r.desk_reject_effective, r.overall_review_acceptance, r.eventual_acceptance]
            for r in calibration_table(config, args.loads)
        ]
        writer.table("calibration", ["tier", "load", "desk_reject_effective", "overall_C", "eventual_rate"], rows)
    elif args.command == "cohort":
        summary = run_single_tier_cohort(args.n, args.tier, config, seed, workers=args.workers)
        _write_cohort(writer, f"cohort_{args.tier}", summary)
    elif args.command == "sua":
        _write_cohort(writer, "sua", run_sua_cohort(args.n, config, seed, workers=args.workers))
    elif args.command == "portfolio":
        result = run_portfolio(config, seed, workers=args.workers)
        writer.table("portfolio_summary", PORTFOLIO_COLUMNS, [_stat_row(g) for g in result.groups.values()])
        writer.table(
            "faculty",
            FACULTY_COLUMNS,
            [
                [f.faculty_id, f.is_adopter, f.manuscripts_generated, f.accepted_total,
                 f.accepted_by_tier[Tier.T1], f.accepted_by_tier[Tier.T2], f.accepted_by_tier[Tier.T3],
                 f.desk_rejections_total, f.censored_in_flight]
                for f in result.faculty
            ],
        )
    elif args.command == "sweep":
        rows = run_load_sweep(config, args.loads, seed, workers=args.workers)
        writer.table("sweep", ["load"] + PORTFOLIO_COLUMNS, [[float(r.load)] + _stat_row(r.summary) for r in rows])
    elif args.command == "validate":
        from .validation import run_acceptance

        results = run_acceptance(workers=args.workers, stream=sys.stdout)
        writer.table(
            "validation",
            ["criterion", "name", "passed", "seconds", "detail"],
            [[r.number, r.name, r.passed, r.seconds, " | ".join(r.details)] for r in results],
        )
        return 0 if all(r.passed for r in results) else 1
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = parse_config(args.config) if args.config else default_baseline_config()
    except ConfigError as exc:
        print(f"publadder: error: {exc}", file=sys.stderr)
        return 1
    seed = args.seed
    if seed == "random":
        seed = int(np.random.SeedSequence().entropy % 2**64)
    if seed is None:
        seed = config.master_seed
    config = dataclasses.replace(config, master_seed=seed)

    writer = _Writer(args.out, args.format)
    started = time.perf_counter()
    try:
        code = _run(args, config, seed, writer)
    except (ValueError, ArithmeticError) as exc:
        print(f"publadder: {args.command} failed: {exc}", file=sys.stderr)
        return 1
    manifest = {
        "command": args.command,
        "argv": list(sys.argv[1:] if argv is None else argv),
        "config": config_to_dict(config),
        "master_seed": seed,
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "outputs": writer.paths,
        "wall_clock_seconds": time.perf_counter() - started,
    }
    (args.out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: simulate, sweep, analyze.

``simulate`` runs one scenario's replications and writes a statistics
CSV (optionally Paje traces and task-graph JSON per run). ``sweep`` runs
a scenario over axis grids. ``analyze`` turns those CSVs into BoxPlot
quartile tables (min, q1, median, q3, max per x-value) ready for
external plotting.
"""
from __future__ import annotations

import argparse
import statistics
import sys
from pathlib import Path

from .analysis import (
    acceptable,
    fit_constant,
    limit_latency_theoretical,
    overhead_ratio,
    quartiles,
)
from .config import load_scenario
from .errors import ConfigError
from .runner import run_scenario, sweep
from .tracing import (
    export_json_dag,
    export_paje,
    format_quartile_csv,
    read_stats_csv,
    stats_row,
    write_stats_csv,
)


def _parse_axis(text):
    """An --axis argument: name=start:stop:step, name=v1,v2,..., or policy=swt,mwt."""
    if "=" not in text:
        raise ConfigError(f"axis must look like name=values, got {text!r}")
    name, _, spec = text.partition("=")
    name = name.strip()
    spec = spec.strip()
    if name == "policy":
        values = [v.strip() for v in spec.split(",")]
        for v in values:
            if v not in ("swt", "mwt"):
                raise ConfigError(f"policy axis values are swt/mwt, got {v!r}")
        return name, values
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range axis must be start:stop:step, got {spec!r}")
        start, stop, step = (int(x) for x in parts)
        if step < 1:
            raise ConfigError("axis step must be >= 1")
        return name, list(range(start, stop + 1, step))
    try:
        return name, [int(v) for v in spec.split(",")]
    except ValueError:
        raise ConfigError(f"axis values must be integers: {spec!r}") from None


def _out_dir(args, config):
    out = args.out_dir or config.out_dir or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_simulate(args):
    config = load_scenario(args.config)
    out = _out_dir(args, config)
    reports = run_scenario(
        config, workers=args.workers, keep_logs=args.paje, keep_applications=args.json_dag
    )
    rows = [stats_row(config, i, r.seed, r.stats) for i, r in enumerate(reports)]
    csv_path = out / "stats.csv"
    write_stats_csv(csv_path, rows)
    for report in reports:
        if args.paje:
            (out / f"run_{report.seed}.paje").write_text(export_paje(report.log))
        if args.json_dag:
            (out / f"run_{report.seed}.json").write_text(export_json_dag(report.application))
    makespans = [r.stats.makespan for r in reports]
    print(f"{len(reports)} runs -> {csv_path}")
    print(f"makespan min/median/max: {min(makespans)} / {statistics.median(makespans)} / {max(makespans)}")
    return 0


def _cmd_sweep(args):
    config = load_scenario(args.config)
    axes = [_parse_axis(a) for a in args.axis]
    if not axes:
        raise ConfigError("sweep needs at least one --axis")
    out = _out_dir(args, config)
    result = sweep(config, axes, reps=args.reps, workers=args.workers)
    csv_path = out / "sweep.csv"
    write_stats_csv(csv_path, result.rows(config))
    cells = len(result.cells)
    print(f"{cells} cells x {result.reps} reps -> {csv_path}")
    return 0


def _group(rows, keys):
    groups = {}
    for row in rows:
        groups.setdefault(tuple(row[k] for k in keys), []).append(row)
    return dict(sorted(groups.items()))


def _quartile_table(header_keys, groups, value_fn):
    out_rows = []
    for key, rows in groups.items():
        values = [v for v in (value_fn(r) for r in rows) if v is not None]
        if not values:
            continue
        out_rows.append(list(key) + [len(values)] + [round(v, 6) for v in quartiles(values)])
    return format_quartile_csv(list(header_keys) + ["count", "min", "q1", "median", "q3", "max"], out_rows)


def _analyze_overhead(rows, args):
    groups = _group(rows, ("W", "p", "lambda"))
    return _quartile_table(
        ("W", "p", "lambda"),
        groups,
        lambda r: overhead_ratio(r["makespan"], r["W"], r["p"], r["lambda"], gamma=args.gamma),
    )


def _analyze_fit(rows, args):
    del args
    samples = [(r["W"], r["p"], r["lambda"], r["makespan"]) for r in rows]
    constant = fit_constant(samples)
    return format_quartile_csv(["samples", "fit_constant"], [[len(samples), round(constant, 6)]])


def _analyze_limit_latency(rows, args):
    table = []
    for (total_work, num_procs), group in _group(rows, ("W", "p")).items():
        best = 0
        for latency, cell in _group(group, ("lambda",)).items():
            med = statistics.median_low([r["makespan"] for r in cell])
            if acceptable(med, total_work, num_procs) and latency[0] > best:
                best = latency[0]
        theory = limit_latency_theoretical(total_work, num_procs, fit_c=args.fit_constant)
        table.append(
            [
                total_work,
                num_procs,
                best,
                round(theory, 3),
                round(best / theory, 4) if theory else "",
                round(total_work / num_procs / best, 2) if best else "",
            ]
        )
    return format_quartile_csv(
        ["W", "p", "lambda_experimental", "lambda_theoretical", "ratio", "wp_over_lambda"], table
    )


def _analyze_phases(rows, args):
    del args
    groups = _group(rows, ("W", "p", "lambda", "simultaneous"))
    return _quartile_table(
        ("W", "p", "lambda", "simultaneous"),
        groups,
        lambda r: r["t_startup_end"] if r["all_active_reached"] else None,
    )


def _analyze_mwt_vs_swt(rows, args):
    del args
    table = []
    for key, group in _group(rows, ("W", "p", "lambda")).items():
        by_seed = {}
        for row in group:
            by_seed.setdefault(row["seed"], {})[row["simultaneous"]] = row
        ratios = []
        diffs = []
        for pair in by_seed.values():
            if 0 not in pair or 1 not in pair:
                continue
            swt, mwt = pair[0], pair[1]
            diffs.append(abs(mwt["makespan"] - swt["makespan"]) / swt["makespan"])
            if (
                swt["all_active_reached"]
                and mwt["all_active_reached"]
                and swt["t_startup_end"] > 0
                and mwt["t_startup_end"] > 0
            ):
                ratios.append(swt["t_startup_end"] / mwt["t_startup_end"])
        if not ratios:
            continue
        frac = sum(1 for r in ratios if r > 1.0) / len(ratios)
        table.append(
            list(key)
            + [
                len(ratios),
                round(frac, 4),
                round(statistics.median(ratios), 4),
                round(statistics.median(diffs), 6),
            ]
        )
    return format_quartile_csv(
        ["W", "p", "lambda", "pairs", "frac_startup_gain", "median_startup_ratio", "median_rel_makespan_diff"],
        table,
    )


_ANALYZERS = {
    "overhead": _analyze_overhead,
    "fit": _analyze_fit,
    "limit-latency": _analyze_limit_latency,
    "phases": _analyze_phases,
    "mwt-vs-swt": _analyze_mwt_vs_swt,
}


def _cmd_analyze(args):
    rows = read_stats_csv(args.input)
    if not rows:
        raise ConfigError(f"no rows in {args.input}")
    text = _ANALYZERS[args.what](rows, args)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="stealsim", description="Work-stealing simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario's replications")
    sim.add_argument("--config", required=True, help="scenario JSON file")
    sim.add_argument("--out-dir", default=None)
    sim.add_argument("--workers", type=int, default=None)
    sim.add_argument("--paje", action="store_true", help="write a Paje trace per run")
    sim.add_argument("--json-dag", action="store_true", help="write the executed task graph per run")
    sim.set_defaults(func=_cmd_simulate)

    swp = sub.add_parser("sweep", help="run a scenario over axis grids")
    swp.add_argument("--config", required=True)
    swp.add_argument("--axis", action="append", default=[], help="e.g. lambda=2:500:20 or p=32,64,128")
    swp.add_argument("--reps", type=int, default=None)
    swp.add_argument("--out-dir", default=None)
    swp.add_argument("--workers", type=int, default=None)
    swp.set_defaults(func=_cmd_sweep)

    ana = sub.add_parser("analyze", help="summarize a statistics CSV")
    ana.add_argument("what", choices=sorted(_ANALYZERS))
    ana.add_argument("--input", required=True, help="CSV from simulate or sweep")
    ana.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    ana.add_argument("--gamma", type=float, default=4.0, help="bound constant (overhead)")
    ana.add_argument("--fit-constant", type=float, default=3.8, help="fitted constant (limit-latency)")
    ana.set_defaults(func=_cmd_analyze)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

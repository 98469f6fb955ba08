"""Command-line front end.

Exit codes: 0 success or validation pass, 1 validation failure, 2 usage
or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import analytic, oracle
from .estimator import local_center_check, ml_estimate, rumor_centrality
from .experiment import CSV_COLUMNS, ExperimentConfig, figure_tables, validate
from .tree_sim import (InfectedTree, TreeFormatError, distance, format_path,
                       simulate_clock, simulate_uniform, trial_stream)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return format(x, ".15g")
    return str(x)


def _write_csv(rows, columns, out):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    out.write(buf.getvalue())


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def cmd_analytic(args, out) -> int:
    if args.m < args.dmax + 1:
        raise _Usage(f"--m must be at least --dmax + 1 ({args.dmax + 1})")
    rows = figure_tables(args.dmax, [args.delta], args.m)
    if args.format == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
    else:
        _write_csv(rows, CSV_COLUMNS, out)
    return 0


def cmd_exact(args, out) -> int:
    if args.n < 2:
        raise _Usage("--n must be at least 2")
    table = {0: float(oracle.exact_correct_prob(3, args.n))}
    table.update(analytic.dn_exact_delta3_table(args.n))
    dmax = args.dmax if args.dmax is not None else max(table)
    rows = [{"n": args.n, "d": d, "probability": table.get(d, 0.0)} for d in range(dmax + 1)]
    if args.format == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
    else:
        _write_csv(rows, ("n", "d", "probability"), out)
    return 0


def cmd_simulate(args, out) -> int:
    if args.n < 1:
        raise _Usage("--n must be at least 1")
    simulate = simulate_uniform if args.mode == "uniform" else simulate_clock
    tree = simulate(args.delta, args.n, trial_stream(args.seed, 0))
    text = tree.to_json() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def _load_tree(path: str) -> InfectedTree:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None
    try:
        return InfectedTree.from_json(text)
    except json.JSONDecodeError as exc:
        raise _Usage(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    except TreeFormatError as exc:
        raise _Usage(f"{path}: {exc}") from None


def cmd_estimate(args, out) -> int:
    tree = _load_tree(args.tree)
    # tie-breaking coin comes from the same substream layout as simulate
    rng = trial_stream(args.seed, 1)
    estimate = ml_estimate(tree, rng)
    table = rumor_centrality(tree)
    result = {
        "estimate": format_path(estimate),
        "distance_to_source": distance(estimate, tree.source),
        "classification": local_center_check(tree, estimate).value,
        "exact": table.exact,
        "centrality": {format_path(v): str(r) if table.exact else r
                       for v, r in sorted(table.values.items())},
    }
    json.dump(result, out, indent=2)
    out.write("\n")
    return 0


def cmd_validate(args, out) -> int:
    try:
        config = ExperimentConfig(args.delta, args.n, args.trials, args.seed,
                                  mode=args.mode, target=args.target)
    except ValueError as exc:
        raise _Usage(str(exc)) from None
    if config.target == "exact-finite-n" and config.delta != 3:
        raise _Usage("--target exact-finite-n requires --delta 3")
    if args.m < args.dmax + 1:
        raise _Usage(f"--m must be at least --dmax + 1 ({args.dmax + 1})")
    report = validate(config, dmax=args.dmax, m=args.m)
    if args.format == "csv":
        rows = [{"delta": args.delta, "d": r.d, "m": args.m if args.target == "bound" else None,
                 "lower": r.target, "upper": r.target_upper, "empirical": r.empirical,
                 "se": r.se, "z": r.z} for r in report.rows]
        _write_csv(rows, CSV_COLUMNS, out)
    else:
        json.dump(report.to_dict(), out, indent=2)
        out.write("\n")
    return 0 if report.passed else 1


def cmd_oracle(args, out) -> int:
    try:
        dist = oracle.exact_dn(args.delta, args.n)
    except oracle.CapacityError as exc:
        raise _Usage(str(exc)) from None
    json.dump({str(d): _frac(p) for d, p in dist.masses.items()}, out, separators=(",", ":"))
    out.write("\n")
    return 0


class _Usage(Exception):
    pass


def _delta(text: str) -> int:
    value = int(text)
    if value < 3:
        raise argparse.ArgumentTypeError("degree must be >= 3 (the line graph is not supported)")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rumor-locus",
        description="Distance between a rumor source and its ML estimate on regular trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="cumulative within-distance bounds and exact values")
    p.add_argument("--delta", type=_delta, required=True)
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--m", type=int, default=analytic.DEFAULT_M)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("exact", help="exact finite-n distance law for delta = 3")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dmax", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("simulate", help="grow one infected tree and write it as JSON")
    p.add_argument("--delta", type=_delta, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", choices=("uniform", "clock"), default="uniform")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="ML source estimate for a tree JSON file")
    p.add_argument("--tree", required=True)
    p.add_argument("--seed", type=int, default=0, help="seed for the tie-breaking coin")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("validate", help="Monte Carlo check against theory")
    p.add_argument("--delta", type=_delta, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mode", choices=("uniform", "clock"), default="uniform")
    p.add_argument("--target", choices=("exact-finite-n", "limit", "bound"),
                   default="exact-finite-n")
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--m", type=int, default=analytic.DEFAULT_M)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="exact rational distance law by enumeration")
    p.add_argument("--delta", type=_delta, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except _Usage as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

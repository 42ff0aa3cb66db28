"""Sweep eps for a configured potential and compare measured vs predicted.

Prints a human-readable table: per eps the predicted eigenvalue -eps^4 k2^2,
the transfer-matrix measurement, their ratio, and the scaled remainder.  The
footer reports the log-log slope of |lambda_num| against eps (4 when the
leading order holds) and the remainder spread.  Use --out to also write the
machine-readable CSV the `oscispec sweep` command produces.
"""

import argparse
import dataclasses
import sys

from oscispec.cli import emit_csv, run_sweep
from oscispec.config import load_config, parse_config

CANONICAL = """\
mode = cos 1 poly 100 2
support = 0 1
eps = 0.1 0.07 0.05 0.035 0.025
points_per_period = 40
"""


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="config file; omit for the built-in canonical potential")
    ap.add_argument("--eps", type=float, nargs="+", help="override the eps list (decreasing)")
    ap.add_argument("--points-per-period", type=int, help="fast-scale grid density override")
    ap.add_argument("--out", help="also write the sweep CSV to this path")
    args = ap.parse_args(argv)

    cfg = load_config(args.config) if args.config else parse_config(CANONICAL)
    if args.eps:
        cfg = dataclasses.replace(cfg, epsilons=tuple(args.eps))
    if args.points_per_period:
        cfg = dataclasses.replace(cfg, points_per_period=args.points_per_period)

    records, summary = run_sweep(cfg)

    print(f"{'eps':>8} {'lambda_pred':>24} {'lambda_num':>24} {'ratio':>8} {'remainder':>10}")
    for r in records:
        if r.lambda_num is None:
            print(f"{r.eps:8.4f} {r.lambda_pred.real:24.16e} {'(no bound state)':>24}")
            continue
        ratio = abs(r.lambda_num / r.lambda_pred)
        print(
            f"{r.eps:8.4f} {r.lambda_pred.real:24.16e} {r.lambda_num.real:24.16e}"
            f" {ratio:8.4f} {r.remainder_ratio:10.5f}"
        )
    if summary.slope is not None:
        print(f"slope: {summary.slope:.4f} (expect 4)")
    if summary.ratio_spread is not None:
        print(f"remainder spread (max/min): {summary.ratio_spread:.2f}")

    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(emit_csv(records, summary=summary))
        print(f"csv written to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Reproduce the Toffoli-count scaling study and the leading-coefficient fit.

Writes one CSV per harness (adder, modmul) for n = 2^m, m in 3..MAX_M, then
prints the fitted leading coefficient against the matching asymptotic model.
The modmul sweep at the default sizes takes a few minutes; pass --max-m 7
for a quick look.
"""
import argparse
import sys
from pathlib import Path

from dirtyshor.resources import fit_leading_coefficient, rows_to_csv, scaling_table

MODELS = {"adder": "nlogn", "modmul": "n2logn"}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-m", type=int, default=9, help="largest size is 2^MAX_M (default 9)")
    ap.add_argument("--mode", choices=("serial", "parallel"), default="serial")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default=".", help="directory for the CSV files")
    args = ap.parse_args()

    if args.max_m < 5:
        ap.error("--max-m must be at least 5 so the fit has three usable rows")
    sizes = [1 << m for m in range(3, args.max_m + 1)]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for harness, model in MODELS.items():
        print(f"{harness}: synthesizing n = {sizes} ({args.mode}) ...", flush=True)
        rows = scaling_table(sizes, harness=harness, mode=args.mode, seed=args.seed)
        path = out_dir / f"scaling_{harness}_{args.mode}.csv"
        path.write_text(rows_to_csv(rows))
        k = fit_leading_coefficient(rows, model)
        print(f"  wrote {path} ({len(rows)} rows)")
        print(f"  fit: toffoli ~= {k:.2f} * {model}")
        for row in rows:
            print(f"    n={row.n:5d} toffoli={row.toffoli:10d} depth={row.depth:10d} "
                  f"({row.seconds:.2f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())

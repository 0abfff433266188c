#!/usr/bin/env python3
"""Factor a handful of small odd composites end to end and print transcripts.

Every attempt's measurement record is shown, including the unlucky draws
(gcd shortcuts, y=0 outcomes, odd orders), so a full run documents how the
classical post-processing behaves on each case.
"""
import argparse
import sys
import time

from dirtyshor.shor import format_transcript, shor_factor

DEFAULT_MODULI = (15, 21, 33, 35)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, nargs="*", default=list(DEFAULT_MODULI),
                    help=f"moduli to factor (default {DEFAULT_MODULI})")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--attempts", type=int, default=16)
    args = ap.parse_args()

    failures = 0
    for N in args.N:
        print(f"=== N={N} seed={args.seed} ===")
        t0 = time.perf_counter()
        outcome = shor_factor(N, attempts=args.attempts, seed=args.seed)
        dt = time.perf_counter() - t0
        for k, run in enumerate(outcome.runs, start=1):
            shortcut = " (gcd shortcut)" if run.y is None and run.factors else ""
            print(f"attempt={k} a={run.a}{shortcut}")
            sys.stdout.write(format_transcript(run))
        if outcome.factors:
            p, q = outcome.factors
            print(f"N={N} = {p} * {q}  [{outcome.attempts_used} attempts, {dt:.1f}s]")
        else:
            failures += 1
            print(f"N={N}: no factors within {args.attempts} attempts [{dt:.1f}s]")
        print()
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

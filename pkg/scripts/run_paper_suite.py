#!/usr/bin/env python3
"""Run the golden example suite and print the verdict report.

Exit status 0 when every check passes, 1 otherwise.  Equivalent to
`opalg paper-suite` but convenient when the package is not installed as a
script entry point.
"""

import argparse
import sys

from opalg.suite import paper_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-8)
    ap.add_argument("--timings", action="store_true",
                    help="print per-check wall times to stderr")
    args = ap.parse_args()

    report = paper_suite(seed=args.seed, tol=args.tol)
    print(report["verdict_text"])
    if args.timings:
        for name, secs in report["timings_s"].items():
            print(f"{secs:8.2f}s  {name}", file=sys.stderr)
    return 0 if report["all_pass"] else 1


if __name__ == "__main__":
    sys.exit(main())

"""Run the acceptance criteria and print one line per criterion.

    python3 scripts/run_acceptance.py [--seed 0] [--only 1,3,8]
"""

import argparse
import sys
import time

from hsfield.acceptance import CRITERIA, DEFAULT_SEED, run_criterion


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--only", default=None, help="comma-separated criterion numbers")
    args = ap.parse_args()
    only = {int(x) for x in args.only.split(",")} if args.only else None
    failed = 0
    for num, _, _ in CRITERIA:
        if only is not None and num not in only:
            continue
        start = time.perf_counter()
        r = run_criterion(num, args.seed)
        elapsed = time.perf_counter() - start
        failed += not r.passed
        print(f"[{'PASS' if r.passed else 'FAIL'}] {num:2d} {r.title} ({elapsed:.2f}s, {r.checks} checks): {r.detail}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

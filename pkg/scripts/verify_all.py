"""Run every verification suite and print a per-suite summary with timings."""

import argparse
import sys
import time

from qgalilei.cli import SUITES, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degree", type=int, default=4)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args()

    all_ok = True
    for name in SUITES:
        start = time.perf_counter()
        report = run_suite(name, args.degree)
        elapsed = time.perf_counter() - start
        cases = sum(r.cases for r in report.records)
        print(f"{name:12s} {'pass' if report.passed else 'FAIL':4s} checks={len(report.records):3d} "
              f"cases={cases:6d} {elapsed:6.2f}s")
        if args.verbose or not report.passed:
            for r in report.records:
                print("   ", r.to_line())
        all_ok &= report.passed
    sys.exit(0 if all_ok else 1)


if __name__ == "__main__":
    main()

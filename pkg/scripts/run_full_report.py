#!/usr/bin/env python3
"""Run every verification suite and drop the JSON/CSV reports in one place.

Equivalent to `pwenv report --out <dir>` but convenient to edit when
experimenting with config fields.
"""

import argparse
import sys
import time

from pwenv import ExperimentConfig, run_all


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="reports", help="report directory (default ./reports)")
    ap.add_argument("--seed", type=int, default=22026)
    ap.add_argument("--profile", default="fast", choices=("fast", "default", "precise"))
    args = ap.parse_args()

    cfg = ExperimentConfig(suite="all", seed=args.seed, quad_profile=args.profile,
                           out_dir=args.out)
    t0 = time.perf_counter()
    reports = run_all(cfg)
    dt = time.perf_counter() - t0

    failures = 0
    for name, rep in reports.items():
        s = rep.summary
        failures += s["fail"]
        print(f"{name:<12} pass={s['pass']:<4} fail={s['fail']:<3} "
              f"low-confidence={s['low-confidence']:<3} report-only={s['report-only']}")
    print(f"total {dt:.1f}s, reports in {args.out}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

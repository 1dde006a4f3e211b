#!/usr/bin/env python3
"""Run the seeded plant-and-recover fuzz harness and print or save the
deterministic report.

Examples:
    python scripts/run_fuzz.py --seed 42 --trials 200 --kind t
    python scripts/run_fuzz.py --seed 7 --trials 100 --kind star \
        --flavor HermStar --out report.json
"""

import argparse
import sys
import time

from paircanon import FuzzConfig, run_fuzz
from paircanon.fuzz import FLAVORS
from paircanon.serialize import dump_json


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--max-dim", type=int, default=6)
    ap.add_argument("--kind", choices=("t", "star"), required=True)
    ap.add_argument("--entry-bound", type=int, default=3)
    ap.add_argument("--flavor", choices=FLAVORS, default=None)
    ap.add_argument("--out", help="write the full JSON report here")
    args = ap.parse_args()

    cfg = FuzzConfig(
        seed=args.seed,
        trials=args.trials,
        max_dim=args.max_dim,
        kind={"t": "T", "star": "Star"}[args.kind],
        entry_bound=args.entry_bound,
        flavor=args.flavor,
    )
    t0 = time.time()
    report = run_fuzz(cfg)
    elapsed = time.time() - t0
    print(
        f"seed {report.seed}: {report.trials} trials, "
        f"{len(report.mismatches)} mismatches, "
        f"{len(report.witness_failures)} witness failures, {elapsed:.1f}s"
    )
    for t in report.mismatches:
        r = report.records[t]
        print(f"  trial {t}: planted {r.planted} got {r.recovered}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dump_json(report.to_json()))
        print(f"wrote {args.out}")
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())

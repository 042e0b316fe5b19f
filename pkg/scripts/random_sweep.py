"""Verify random braid diagrams and tabulate cost against crossing number.

    python3 scripts/random_sweep.py --seed 3 --count 200
"""

import argparse
import random
import time
from collections import defaultdict

from khlee.generate import random_closed, random_tangle
from khlee.lee_engine import verify


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--max-crossings", type=int, default=6)
    ap.add_argument("--no-oracle", action="store_true")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    by_n = defaultdict(lambda: [0, 0, 0.0])  # diagrams, failures, seconds
    for i in range(args.count):
        make = random_closed if i % 2 == 0 else random_tangle
        d = make(rng, max_crossings=args.max_crossings)
        t = time.perf_counter()
        report = verify(d, oracle=not args.no_oracle)
        row = by_n[d.n]
        row[0] += 1
        row[1] += not report.passed
        row[2] += time.perf_counter() - t
        if not report.passed:
            print("FAIL", d.to_pd().replace("\n", " / "), report.checks)

    print(f"{'n':>3} {'diagrams':>9} {'failures':>9} {'mean ms':>9}")
    for n in sorted(by_n):
        k, bad, secs = by_n[n]
        print(f"{n:>3} {k:>9} {bad:>9} {1000 * secs / k:>9.1f}")
    return 1 if any(r[1] for r in by_n.values()) else 0


if __name__ == "__main__":
    raise SystemExit(main())

#!/usr/bin/env python3
"""Shape statistics of standardized cycle counts as n grows.

Prints skewness / excess kurtosis / KS distance for one statistic at a ladder
of sizes, showing the drift toward Gaussian shape.  Works on both sides of
q = 1 (pick an even-cycle statistic like C2 when q > 1).

    python3 scripts/clt_shapes.py --q 0.5 --stat C1 --sizes 250,1000,4000
"""

import argparse
import sys

from mallowsim.harness import cycle_stat_samples, shape_report
from mallowsim.parallel import default_workers, pool_context
from mallowsim.rng import RngStream


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=float, default=0.5)
    ap.add_argument("--stat", default="C1")
    ap.add_argument("--sizes", default="250,1000,4000")
    ap.add_argument("--reps", type=int, default=4_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=default_workers())
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"# q={args.q} stat={args.stat} reps={args.reps}")
    print(f"{'n':>7} {'mean':>10} {'skew':>8} {'ex_kurt':>8} {'ks':>8}  verdict")
    with pool_context(args.workers) as pool:
        for j, n in enumerate(sizes):
            rng = RngStream(args.seed, 20).child(j)
            samples = cycle_stat_samples(
                args.q, n, args.reps, [args.stat], rng, pool
            )[:, 0]
            rep = shape_report(args.stat, samples)
            verdict = "normal-ish" if rep.passed else "off"
            print(f"{n:>7} {samples.mean():>10.3f} {rep.skewness:>8.4f} "
                  f"{rep.excess_kurtosis:>8.4f} {rep.ks_statistic:>8.4f}  {verdict}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

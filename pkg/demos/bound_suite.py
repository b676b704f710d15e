"""Exercise the probability bound suites and print a status summary.

Exact hypergeometric inequalities are evaluated as stated (their slack
should never dip below zero); the sampling-based checks report Wilson
intervals.  The max-weight window check is the one family that genuinely
needs large n: at desk scale its frequency hovers near 0.8, below its
asymptotic target of 1.
"""

import argparse
from collections import Counter

from rigkit.model import trial_rng
from rigkit.verify import (check_conditional_overlap, check_intersection_bounds,
                           check_tail_mass, check_union_coverage,
                           default_intersection_grid)


def show(title, reports):
    counts = Counter(r.status for r in reports)
    print(f"{title}: {dict(counts)}")
    adjudicated = [r for r in reports if r.status in ("pass", "fail")]
    if adjudicated:
        worst = min(adjudicated, key=lambda r: r.slack)
        print(f"  tightest: {worst.bound_id} at {worst.params} "
              f"slack {worst.slack:.3g}")
    for r in reports:
        if r.status == "fail":
            print(f"  FAIL {r.bound_id}: lhs {r.lhs:.4f} vs rhs {r.rhs:.4f} "
                  f"{r.note}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=23)
    ap.add_argument("--trials", type=int, default=400)
    args = ap.parse_args()
    rng = trial_rng(args.seed, 0, 0)

    show("intersection inequalities (exact)",
         check_intersection_bounds(default_intersection_grid()))

    sizes = [260] * 10
    show("union coverage", [check_union_coverage(
        m=13000, gamma1=0.2, gamma2=0.5, sizes=sizes, n=1000,
        trials=args.trials, rng=rng)])

    show("conditional overlap", [check_conditional_overlap(
        a=40, b=16, d=100, m=10000, trials=args.trials * 25, rng=rng)])

    show("tail mass sandwich + window", check_tail_mass(
        n=100000, alpha=0.8, c0=1.0, rng=rng, trials=60))


if __name__ == "__main__":
    main()

"""Typical distances grow like ln(ln(n)), not ln(n).

Samples giant pairs at each rung of a doubling n ladder and prints the
median and p90 hop counts next to l2n = ln(ln(2+n)) and the theoretical
ceiling (2+eps) * l2n / ln(1/alpha).  The distance column barely moves
while n grows 64-fold.
"""

import argparse
import math

import numpy as np

from rigkit.graphgen import generate
from rigkit.graphops import bfs_distance, components
from rigkit.model import ModelParams, default_attribute_count, iterated_log, trial_rng


def sample_hops(inc, comp, rng, pairs):
    giant = comp.giant_vertices()
    hops = []
    for _ in range(pairs):
        u, v = rng.choice(giant, size=2, replace=False)
        h = bfs_distance(inc, int(u), int(v)).hops
        if h is not None:
            hops.append(h)
    return hops


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.8)
    ap.add_argument("--epsilon", type=float, default=1.0)
    ap.add_argument("--pairs", type=int, default=80)
    ap.add_argument("--seed", type=int, default=13)
    args = ap.parse_args()

    scale = math.log(1.0 / args.alpha)
    print(f"alpha = {args.alpha}, {args.pairs} giant pairs per n")
    print(f"{'n':>8} {'l2n':>6} {'median':>7} {'p90':>5} {'max':>4} "
          f"{'bound':>7}")
    for exp in range(11, 17):
        n = 2 ** exp
        params = ModelParams(n=n, m=default_attribute_count(n),
                             alpha=args.alpha, c0=1.0)
        rng = trial_rng(args.seed, n, 0)
        inc, _ = generate(params, rng)
        comp = components(inc)
        hops = sample_hops(inc, comp, rng, args.pairs)
        l2n = iterated_log(n)
        bound = (2.0 + args.epsilon) * l2n / scale
        print(f"{n:>8} {l2n:>6.3f} {np.median(hops):>7.1f} "
              f"{np.quantile(hops, 0.9):>5.1f} {max(hops):>4} {bound:>7.1f}")


if __name__ == "__main__":
    main()

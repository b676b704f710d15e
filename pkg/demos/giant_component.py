"""Giant component fraction across an n ladder.

The giant holds a stable positive fraction of vertices once n is past a
few thousand, and the maximal-weight vertex is essentially always inside
it.  Five trials per n keep the spread visible.
"""

import argparse

import numpy as np

from rigkit.graphgen import generate
from rigkit.graphops import components, maximal_vertex
from rigkit.model import ModelParams, default_attribute_count, trial_rng


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=0.8)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--trials", type=int, default=5)
    args = ap.parse_args()

    print(f"alpha = {args.alpha}, {args.trials} trials per n")
    print(f"{'n':>8} {'mean frac':>10} {'min frac':>9} {'components':>11} "
          f"{'u_max in giant':>15}")
    for n in (2000, 8000, 32000, 128000):
        params = ModelParams(n=n, m=default_attribute_count(n),
                             alpha=args.alpha, c0=1.0)
        fracs = []
        counts = []
        hub_in = 0
        for trial in range(args.trials):
            inc, w = generate(params, trial_rng(args.seed, n, trial))
            comp = components(inc)
            fracs.append(comp.giant_fraction())
            counts.append(comp.count)
            hub_in += bool(comp.labels[maximal_vertex(w)] == comp.giant)
        print(f"{n:>8} {np.mean(fracs):>10.4f} {min(fracs):>9.4f} "
              f"{np.mean(counts):>11.0f} {hub_in:>12}/{args.trials}")


if __name__ == "__main__":
    main()

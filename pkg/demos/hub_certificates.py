"""Navigating to the hub: escape, climb, and distance certificates.

Decomposes one instance into its threshold layers, then walks a few
sampled vertices to the maximal vertex: BFS to the top layer ("escape"),
then a greedy weight-increasing climb.  The concatenated walk from v to
u_max and back down to a second vertex certifies d(v1, v2) without a
global search; the certificate can only overshoot the exact distance.
"""

import argparse

from rigkit.graphgen import generate
from rigkit.graphops import bfs_distance, components, maximal_vertex
from rigkit.hubnav import decompose, loglog_certificate, thresholds
from rigkit.model import ModelParams, default_attribute_count, trial_rng


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", type=int, default=30000)
    ap.add_argument("--alpha", type=float, default=0.8)
    ap.add_argument("--seed", type=int, default=17)
    ap.add_argument("--samples", type=int, default=8)
    args = ap.parse_args()

    params = ModelParams(n=args.n, m=default_attribute_count(args.n),
                         alpha=args.alpha, c0=1.0)
    rng = trial_rng(args.seed, args.n, 0)
    inc, w = generate(params, rng)
    th = thresholds(args.n, args.alpha, 1.0)
    dec = decompose(w, th)
    comp = components(inc)
    u_max = maximal_vertex(w)

    print(f"n = {args.n}: t0 = {th.t0:.1f}, k* = {th.k_star}, "
          f"hub core size {dec.hub_core.size}, "
          f"layer sizes {[int(l.size) for l in dec.layers]}")
    print(f"u_max = {u_max} (weight {w.tilde_z[u_max]:.1f}, "
          f"in giant: {bool(comp.labels[u_max] == comp.giant)})\n")

    giant = comp.giant_vertices()
    print(f"{'v':>7} {'exact':>5} {'cert':>4} {'escape':>6} {'climb':>5}  walk")
    for v in rng.choice(giant, size=args.samples, replace=False):
        v = int(v)
        cert = loglog_certificate(inc, dec, v, u_max, u_max)
        exact = bfs_distance(inc, v, u_max).hops
        if cert.certificate_hops is None:
            print(f"{v:>7} {exact!s:>5}    - failed at {cert.failed_stage}")
            continue
        walk = cert.walk()
        shown = " -> ".join(str(x) for x in walk[:6])
        if len(walk) > 6:
            shown += " -> ..."
        print(f"{v:>7} {exact:>5} {cert.certificate_hops:>4} "
              f"{cert.escape_a.total_hops:>6} {cert.climb_a.total_hops:>5}  {shown}")


if __name__ == "__main__":
    main()

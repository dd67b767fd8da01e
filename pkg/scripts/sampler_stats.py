"""Monte Carlo sanity pass over the trajectory sampler.

Draws N specs, prints the empirical ranges/means next to what the sampler
is supposed to produce, plus a coarse ascii histogram of start radii (the
area-uniform draw should pile mass toward the rim, not the center).
"""

import argparse
import math

import numpy as np

from posetraj.seeding import derive_seed
from posetraj.trajectory import Template, sample_trajectory_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=20000)
    ap.add_argument("--seed", type=str, default="sampler-stats")
    args = ap.parse_args()

    radii, sweeps, headings, start_r = [], [], [], []
    n_s = 0
    for i in range(args.n):
        spec = sample_trajectory_spec(derive_seed(args.seed, i))
        radii.append(spec.radius)
        sweeps.append(abs(spec.swept_angle))
        headings.append(spec.initial_heading)
        start_r.append(math.hypot(*spec.start))
        n_s += spec.template is Template.S_CURVE

    def row(name, xs, lo, hi):
        xs = np.asarray(xs)
        print(f"  {name:<14} min={xs.min():.4f}  max={xs.max():.4f}  "
              f"mean={xs.mean():.4f}   expected [{lo:.4f}, {hi:.4f}] "
              f"mean {0.5 * (lo + hi):.4f}")

    print(f"n = {args.n}")
    row("radius", radii, 1.0, 1.5)
    row("|swept|", sweeps, math.pi / 2, math.pi)
    row("heading", headings, 0.0, math.pi / 2)
    print(f"  {'s-curve frac':<14} {n_s / args.n:.4f}   expected 0.5000")

    # start radius: area-uniform in the unit disk -> pdf 2r, cdf r^2
    print("\nstart radius histogram (10 bins, * = 2% of draws)")
    counts, edges = np.histogram(start_r, bins=10, range=(0.0, 1.0))
    for c, lo, hi in zip(counts, edges, edges[1:]):
        frac = c / args.n
        expect = hi * hi - lo * lo
        bar = "*" * round(frac / 0.02)
        print(f"  [{lo:.1f},{hi:.1f})  {frac:.3f} (exp {expect:.3f})  {bar}")


if __name__ == "__main__":
    main()

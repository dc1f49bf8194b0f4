#!/usr/bin/env python3
"""Walk through the two-strategy density: profiles, formulations, bounds.

The density f_d(t) of internal equilibria of a d-player two-strategy random
game can be evaluated four independent ways (weight-polynomial log
derivative, two Legendre-polynomial forms, and literal closed forms for
d <= 4).  This script prints profiles along t, demonstrates that the
formulations agree to machine-level accuracy, checks the pointwise upper
bounds, and shows the symmetry of the frequency-coordinate density.
"""

import math

import numpy as np

from eqdense import (
    density_bounds,
    f2d_closed,
    f2d_via_G,
    f2d_via_legendre,
    f2d_via_legendre_pair,
    g2d,
)


def section(title):
    print()
    print(title)
    print("-" * len(title))


def main():
    section("Density profiles f_d(t) (decreasing in t, growing like sqrt(d-1))")
    ts = [0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0]
    print(f"{'t':>6} " + " ".join(f"d={d:<8}" for d in (2, 5, 20, 100)))
    for t in ts:
        row = " ".join(f"{f2d_via_G(d, t):10.6f}" for d in (2, 5, 20, 100))
        print(f"{t:6.2f} {row}")

    section("Four formulations at d=4, t=0.37")
    t = 0.37
    print(f"  weight polynomial : {f2d_via_G(4, t):.15f}")
    print(f"  Legendre + deriv  : {f2d_via_legendre(4, t):.15f}")
    print(f"  Legendre pair     : {f2d_via_legendre_pair(4, t):.15f}")
    print(f"  closed form       : {f2d_closed(4, t):.15f}")

    section("Worst relative disagreement across formulations (d <= 40)")
    grid = np.concatenate([np.geomspace(0.02, 0.98, 12), np.geomspace(1.02, 40, 12)])
    worst = 0.0
    for d in range(2, 41):
        for tt in grid:
            ref = f2d_via_G(d, float(tt))
            others = (f2d_via_legendre(d, float(tt)),
                      f2d_via_legendre_pair(d, float(tt)))
            worst = max(worst, max(abs(v - ref) for v in others) / ref)
    print(f"  max relative disagreement: {worst:.3e}")

    section("Pointwise upper bounds at d=10")
    print(f"{'t':>6} {'f':>10} {'ratio':>10} {'flat':>10} {'legendre':>10}")
    for t in (0.05, 0.3, 0.8, 2.0):
        f = f2d_via_G(10, t)
        ba, bb, bc = density_bounds(10, t)
        bc_str = f"{bc:10.4f}" if not math.isnan(bc) else "       n/a"
        print(f"{t:6.2f} {f:10.4f} {ba:10.4f} {bb:10.4f} {bc_str}")

    section("Frequency-coordinate density g_d(y) is symmetric about y = 1/2")
    for y in (0.1, 0.25, 0.4):
        print(f"  g_6({y:.2f}) = {g2d(6, y):.10f}   g_6({1 - y:.2f}) = {g2d(6, 1 - y):.10f}")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""The Legendre-polynomial structure behind the density.

The weight polynomial M_{d+1}(t) = sum C(d,k)^2 t^{2k} equals
(1-t^2)^d P_d((1+t^2)/(1-t^2)), its roots in s = t^2 are all real and
negative, and the reverse Turan inequality P_d^2 <= P_{d+1} P_{d-1} on
x >= 1 drives the monotonicity of the scaled density.  This script checks
each identity numerically and prints the conjecture scans.
"""

import math

import numpy as np

from eqdense import (
    UniPoly,
    isolate_positive_roots,
    legendre_eval,
    legendre_identity_residual,
    m_poly,
    verify_m_factorization,
)
from eqdense.suites import suite_conjecture_scan


def section(title):
    print()
    print(title)
    print("-" * len(title))


def main():
    section("Weight polynomial vs Legendre identity, max residual per d")
    for d in (2, 5, 10, 25, 50):
        worst = max(
            legendre_identity_residual(d, float(t))
            for t in np.linspace(0.01, 0.99, 33)
        )
        print(f"  d={d:<3} max residual {worst:.2e}")

    section("Roots of M_d in s = t^2 are all real and negative")
    for d in (3, 6, 10):
        neg = UniPoly([(-1) ** k * c for k, c in enumerate(m_poly(d).coeffs)])
        rs = sorted(b.midpoint for b in isolate_positive_roots(neg))
        print(f"  d={d}: r = {', '.join(f'{r:.6f}' for r in rs)}")
    print(f"  (d=3 exact values: 2 - sqrt(3) = {2 - math.sqrt(3):.6f}, "
          f"2 + sqrt(3) = {2 + math.sqrt(3):.6f})")

    section("Representation residual of (2 pi f)^2 = sum 4 r_i/(t^2+r_i)^2")
    for d in (2, 5, 12, 30):
        res = verify_m_factorization(d, list(np.arange(0.1, 1.0, 0.2)))
        print(f"  d={d:<3} max relative residual {res:.2e}")

    section("Reverse Turan inequality on x >= 1 (P_d^2 <= P_{d+1} P_{d-1})")
    worst = 0.0
    for d in range(2, 60):
        for x in np.linspace(1.0, 30.0, 12):
            leg = legendre_eval(d + 1, float(x))
            margin = leg.p * legendre_eval(d, float(x)).p_prev - leg.p_prev**2
            worst = max(worst, -margin / max(abs(leg.p_prev**2), 1.0))
    print(f"  worst violation (should be <= 0): {worst:.2e}")

    section("Conjecture scans (report-only)")
    rows = suite_conjecture_scan(d_hi=25)
    f_rows = [r for r in rows if r.check_id == "density_increasing_in_d_scan"]
    q_rows = [r for r in rows if r.check_id == "legendre_quartic_nonneg_scan"]
    print(f"  density increasing in d: min forward step "
          f"{min(r.margin for r in f_rows):.3e} over {len(f_rows)} t values")
    print(f"  quartic combination:     min scaled value "
          f"{min(r.margin for r in q_rows):.3e} over d <= 25")
    for r in rows:
        if r.check_id == "asymptotic_ratio_trend":
            print(f"  ratio trend {r.location}: {r.lhs:.4f} -> limit {r.rhs}")


if __name__ == "__main__":
    main()

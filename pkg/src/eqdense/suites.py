"""Verification suites: every identity, bound, and monotonicity property
checked numerically, emitted as uniform rows.

Hard checks report status pass/fail.  Conjecture-adjacent scans (density
increasing in the player count, the quartic Legendre combination staying
nonnegative, the ratio trends for n >= 3) report status "report" whatever
the numbers say: they support open conjectures and are never hard-asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import density as dens
from . import expectation as expect
from .errors import VerificationFailure
from .poly_core import GameDims, legendre_eval, legendre_identity_residual, m_poly, weighted_moments
from .realroots import verify_m_factorization

__all__ = ["CheckRow", "SUITE_NAMES", "run_suite"]


@dataclass(frozen=True)
class CheckRow:
    check_id: str
    location: str
    lhs: float
    rhs: float
    margin: float
    status: str


def _row(check_id, location, lhs, rhs, margin, ok):
    return CheckRow(check_id, location, float(lhs), float(rhs), float(margin),
                    "pass" if ok else "fail")


def _report(check_id, location, lhs, rhs, margin):
    return CheckRow(check_id, location, float(lhs), float(rhs), float(margin), "report")


def _t_grid(points):
    # log-spaced over both sides of t = 1, avoiding the removable singularity
    lo = np.geomspace(0.011, 0.989, points // 2)
    hi = np.geomspace(1.013, 97.0, points - points // 2)
    return np.concatenate([lo, hi])


def suite_identities(d_lo=2, d_hi=40, grid=14):
    rows = []
    ts = _t_grid(grid)
    for d in range(d_lo, d_hi + 1):
        # closed-form anchors at t = 0 and t = 1
        f0 = dens.f2d_via_G(d, 0.0)
        rows.append(_row("anchor_f_at_0", f"d={d}", f0, (d - 1) / math.pi,
                         abs(f0 - (d - 1) / math.pi) / ((d - 1) / math.pi),
                         abs(f0 - (d - 1) / math.pi) <= 1e-12 * (d - 1)))
        f1 = dens.f2d_via_G(d, 1.0)
        ref = (d - 1) / (2.0 * math.pi * math.sqrt(2 * d - 3))
        rows.append(_row("anchor_f_at_1", f"d={d}", f1, ref,
                         abs(f1 - ref) / ref, abs(f1 - ref) <= 1e-12 * ref))
        # agreement of all two-strategy formulations
        worst = 0.0
        for t in ts:
            vals = [
                dens.f2d_via_G(d, float(t)),
                dens.f2d_via_legendre(d, float(t)),
                dens.f2d_via_legendre_pair(d, float(t)),
            ]
            if d <= 4:
                vals.append(dens.f2d_closed(d, float(t)))
            ref = vals[0]
            worst = max(worst, max(abs(v - ref) for v in vals[1:]) / ref)
        rows.append(_row("formulation_equivalence", f"d={d}", worst, 1e-9,
                         worst, worst < 1e-9))
        # inversion symmetry f(1/t) = t^2 f(t)
        worst = 0.0
        for t in ts:
            lhs = dens.f2d_via_G(d, 1.0 / float(t))
            rhs = float(t) ** 2 * dens.f2d_via_G(d, float(t))
            worst = max(worst, abs(lhs - rhs) / rhs)
        rows.append(_row("inversion_symmetry", f"d={d}", worst, 1e-10,
                         worst, worst < 1e-10))
        # frequency-coordinate symmetry about 1/2
        worst = 0.0
        for y in np.linspace(0.02, 0.49, 12):
            a, b = dens.g2d(d, float(y)), dens.g2d(d, 1.0 - float(y))
            worst = max(worst, abs(a - b) / b)
        rows.append(_row("g_symmetry", f"d={d}", worst, 1e-12, worst, worst < 1e-12))
        # weight polynomial vs Legendre identity
        worst = max(
            legendre_identity_residual(d, float(t)) for t in np.linspace(0.01, 0.99, 25)
        )
        rows.append(_row("legendre_m_identity", f"d={d}", worst, 1e-10,
                         worst, worst < 1e-10))
        # palindromic weight coefficients
        coeffs = m_poly(d).coeffs
        pal = all(coeffs[k] == coeffs[d - 1 - k] for k in range(d))
        rows.append(_row("m_poly_palindrome", f"d={d}", float(pal), 1.0, 0.0, pal))
    # general-density reduction to the two-player closed form
    for n in (3, 4):
        worst = 0.0
        pts = [np.full(n - 1, v) for v in (0.3, 1.0, 2.5)]
        for t in pts:
            a = dens.fnd_general(GameDims(n, 2), t)
            b = dens.fn2(n, t)
            worst = max(worst, abs(a - b) / b)
        rows.append(_row("fn2_reduction", f"n={n},d=2", worst, 1e-9, worst, worst < 1e-9))
    # elliptic ensemble coincides with the two-player two-strategy density
    worst = 0.0
    for t in (0.0, 0.4, 1.0, 3.0):
        a = dens.f_elliptic(GameDims(2, 2), [t])
        b = dens.f2d_closed(2, t)
        worst = max(worst, abs(a - b) / b)
    rows.append(_row("elliptic_reduction_d2", "n=2,d=2", worst, 1e-13, worst, worst < 1e-13))
    # Legendre recurrence self-consistency on |x| >= 1
    worst = 0.0
    for x in np.linspace(1.0, 50.0, 15):
        x = float(x)
        p_before = 1.0  # P_{d-2} from the previous order
        for d in range(1, 201):
            leg = legendre_eval(d, x)
            if d >= 2:
                lhs = d * leg.p
                rhs = (2 * d - 1) * x * leg.p_prev - (d - 1) * p_before
                scale = max(abs(lhs), abs(rhs), 1.0)
                if math.isfinite(lhs) and math.isfinite(rhs):
                    worst = max(worst, abs(lhs - rhs) / scale)
            p_before = leg.p_prev
    rows.append(_row("legendre_recurrence", "x in [1,50], d<=200", worst, 1e-12,
                     worst, worst < 1e-12))
    # endpoint value P_d(1) = 1
    worst = max(abs(legendre_eval(d, 1.0).p - 1.0) for d in range(0, 201))
    rows.append(_row("legendre_at_1", "d<=200", worst, 0.0, worst, worst == 0.0))
    # weighted-moment covariance is positive semi-definite
    rng = np.random.default_rng(20240817)
    worst = 0.0
    for _ in range(40):
        n = int(rng.integers(2, 5))
        d = int(rng.integers(2, 21))
        t = np.exp(rng.normal(0.0, 1.2, size=n - 1))
        wm = weighted_moments(GameDims(n, d), t)
        cov = wm.covariance()
        eig = np.linalg.eigvalsh(cov)
        scale = max(float(eig.max()), 1e-30)
        worst = max(worst, -float(eig.min()) / scale)
    rows.append(_row("moments_psd", "random n<=4,d<=20", worst, 1e-12,
                     worst, worst < 1e-12))
    return rows


def suite_bounds(d_lo=2, d_hi=100, grid=14):
    rows = []
    ts = np.concatenate([[0.0], _t_grid(grid)])
    ds = sorted(set(list(range(d_lo, min(d_hi, 20) + 1))
                    + [int(x) for x in np.geomspace(2, max(d_hi, 2), 12)]))
    ds = [d for d in ds if d_lo <= d <= d_hi]
    for d in ds:
        worst = -math.inf
        for t in ts:
            f = dens.f2d_via_G(d, float(t))
            ba, bb, bc = dens.density_bounds(d, float(t))
            cap = min(ba, bb) if t > 0 else bb
            if t < 1.0:
                cap = min(cap, bc)
            # margin: how far below the bound the density sits (>= 0 expected)
            worst = max(worst, (f - cap) / cap)
        rows.append(_row("density_upper_bounds", f"d={d}", worst, 0.0,
                         worst, worst <= 1e-12))
    # two-player multi-strategy bounds
    rng = np.random.default_rng(7)
    for n in (2, 3, 4):
        worst = -math.inf
        for _ in range(50):
            t = np.exp(rng.normal(0.0, 1.0, size=n - 1))
            f = dens.fn2(n, t)
            b1, b2 = dens.fn2_bounds(n, t)
            worst = max(worst, (f - min(b1, b2)) / min(b1, b2))
        rows.append(_row("fn2_upper_bounds", f"n={n}", worst, 0.0,
                         worst, worst <= 1e-12))
    return rows


def suite_e_bounds(d_lo=2, d_hi=1000, grid=None, cfg=None):
    """Explicit two-sided bounds on E(2, d) for a sweep of player counts."""
    rows = []
    ds = sorted(set(list(range(d_lo, min(d_hi, 60) + 1))
                    + [int(x) for x in np.geomspace(max(d_lo, 2), d_hi, 12)]))
    ds = [d for d in ds if d_lo <= d <= d_hi]
    for d in ds:
        e = expect.expected_count_2d(d, cfg)
        lo = expect.lower_bound_E2(d)
        hi = expect.upper_bound_E2(d)
        slack = e.error_estimate + 1e-12 * e.value
        ok = lo - slack <= e.value <= hi + slack
        rows.append(_row("E2_two_sided_bounds", f"d={d}", e.value,
                         lo, min(e.value - lo, hi - e.value), ok))
    return rows


def suite_monotonicity(d_lo=2, d_hi=60, grid=12, cfg=None):
    rows = []
    ts = np.concatenate([[0.0], _t_grid(grid)])
    # density is nonincreasing along t
    for d in range(d_lo, d_hi + 1):
        dense_grid = np.concatenate([[0.0], np.geomspace(1e-3, 50.0, 120)])
        vals = dens._f2d_G_batch(d, dense_grid)
        worst = float(np.max(np.diff(vals)))
        rows.append(_row("density_decreasing_in_t", f"d={d}", worst, 0.0,
                         worst, worst <= 1e-12 * float(vals[0])))
    # scaled density nonincreasing in d at fixed t
    for t in ts:
        seq = [dens.f2d_via_G(d, float(t)) / (d - 1) for d in range(d_lo, d_hi + 1)]
        worst = float(np.max(np.diff(seq)))
        rows.append(_row("scaled_density_decreasing_in_d", f"t={t:.4g}", worst, 0.0,
                         worst, worst <= 1e-12 * seq[0]))
    # scaled expected counts nonincreasing in d
    es = [expect.expected_count_2d(d, cfg) for d in range(d_lo, d_hi + 1)]
    scaled = [e.value / (e.dims.d - 1) for e in es]
    err = max(e.error_estimate for e in es)
    worst = float(np.max(np.diff(scaled)))
    rows.append(_row("scaled_E2_decreasing_in_d", f"d={d_lo}..{d_hi}", worst, 0.0,
                     worst, worst <= 2 * err + 1e-12))
    scaled_se = [0.5 * s for s in scaled]
    worst_se = float(np.max(np.diff(scaled_se)))
    rows.append(_row("scaled_SE2_decreasing_in_d", f"d={d_lo}..{d_hi}", worst_se, 0.0,
                     worst_se, worst_se <= err + 1e-12))
    return rows


def suite_turan(d_lo=2, d_hi=100, grid=25):
    """Reverse Turan inequality P_d^2 <= P_{d+1} P_{d-1} on x >= 1."""
    rows = []
    xs = np.linspace(1.0, 50.0, grid)
    for d in range(max(d_lo, 1), d_hi + 1):
        worst = -math.inf
        for x in xs:
            leg = legendre_eval(d + 1, float(x))
            p_next, p_d = leg.p, leg.p_prev
            p_prev = legendre_eval(d, float(x)).p_prev
            lhs = p_d * p_d
            rhs = p_next * p_prev
            if not (math.isfinite(lhs) and math.isfinite(rhs)):
                continue  # overflow range: ratios no longer informative
            worst = max(worst, (lhs - rhs) / max(abs(rhs), 1.0))
        rows.append(_row("reverse_turan", f"d={d}", worst, 0.0,
                         worst, worst <= 1e-12))
    return rows


def suite_factorization(d_lo=2, d_hi=30):
    rows = []
    ts = np.linspace(0.1, 0.9, 9)
    for d in range(d_lo, d_hi + 1):
        try:
            res = verify_m_factorization(d, [float(t) for t in ts])
            rows.append(_row("m_factorization_residual", f"d={d}", res, 1e-8,
                             res, res < 1e-8))
            rows.append(_row("m_roots_real_negative", f"d={d}", 1.0, 1.0, 0.0, True))
        except VerificationFailure:
            rows.append(CheckRow("m_roots_real_negative", f"d={d}", 0.0, 1.0,
                                 1.0, "fail"))
    return rows


def _legendre_quartic_combination(d, x):
    """(2d+1) P_d^4 - P_{d-1}^2 [(2d-1) P_{d+1}^2 + 2 P_d^2]."""
    leg = legendre_eval(d + 1, x)
    p_next, p_d = leg.p, leg.p_prev
    p_prev = legendre_eval(d, x).p_prev
    return (2 * d + 1) * p_d**4 - p_prev**2 * ((2 * d - 1) * p_next**2 + 2 * p_d**2)


def suite_conjecture_scan(d_lo=2, d_hi=None, grid=12, cfg=None):
    """Report-only scans.  With the default ``d_hi=None`` each scan runs its
    own standard range (density-in-d to 60, quartic combination to 40, ratio
    trends to 100 for n=3 and 20 for n=4); an explicit ``d_hi`` clamps all of
    them for quick looks."""
    rows = []
    ts = _t_grid(grid)
    f_hi = 60 if d_hi is None else d_hi
    q_hi = 40 if d_hi is None else min(d_hi, 40)
    # scan: density nondecreasing in the player count (conjectured, unproven)
    for t in ts:
        seq = [dens.f2d_via_G(d, float(t)) for d in range(d_lo, f_hi + 1)]
        worst = float(np.min(np.diff(seq)))
        rows.append(_report("density_increasing_in_d_scan", f"t={t:.4g}",
                            worst, 0.0, worst))
    # scan: quartic Legendre combination nonnegative on x in [1, 20]
    for d in range(max(d_lo, 2), q_hi + 1):
        worst = math.inf
        for x in np.linspace(1.0, 20.0, 40):
            val = _legendre_quartic_combination(d, float(x))
            scale = max(abs((2 * d + 1) * legendre_eval(d, float(x)).p ** 4), 1.0)
            if math.isfinite(val):
                worst = min(worst, val / scale)
        rows.append(_report("legendre_quartic_nonneg_scan", f"d={d}", worst, 0.0, worst))
    # trend tables for the conjectured general-case ratio limit (n-1)/2;
    # a 1e-4 relative count error moves the ratio by < 1e-4, far below the
    # trend signal, so the scan can run at loose tolerance
    for n, d_list, cfg_n in (
        (3, (3, 5, 10, 20, 40, 70, 100), expect.QuadratureConfig(1e-6, 1e-8)),
        (4, (3, 5, 10, 15, 20), expect.QuadratureConfig(1e-4, 1e-6)),
    ):
        scan_cfg = cfg if cfg is not None else cfg_n
        cap = d_list[-1] if d_hi is None else min(d_hi, d_list[-1])
        for d in d_list:
            if d > cap:
                continue
            r = expect.asymptotic_ratio(n, d, scan_cfg)
            rows.append(_report("asymptotic_ratio_trend", f"n={n},d={d}",
                                r, (n - 1) / 2.0, (n - 1) / 2.0 - r))
    return rows


SUITE_NAMES = {
    "identities": suite_identities,
    "bounds": suite_bounds,
    "e-bounds": suite_e_bounds,
    "monotonicity": suite_monotonicity,
    "turan": suite_turan,
    "factorization": suite_factorization,
    "conjecture-scan": suite_conjecture_scan,
}


def run_suite(name, **kwargs):
    """Run one named verification suite and return its check rows."""
    try:
        fn = SUITE_NAMES[name]
    except KeyError:
        raise ValueError(
            f"unknown suite {name!r}; choose from {sorted(SUITE_NAMES)}"
        ) from None
    return fn(**kwargs)

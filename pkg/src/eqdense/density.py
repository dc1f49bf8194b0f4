"""Expected-density evaluators for internal equilibria of random games.

For two-strategy games the density admits several equivalent formulations
(log-derivative of the weight polynomial, two Legendre-polynomial forms, and
literal closed forms for small player counts); they are all implemented
independently so each can serve as an oracle for the others.  The general
multi-strategy density comes from the covariance of the log-weight sum, and
the elliptic (square-root-binomial) ensemble provides a closed-form pipeline
oracle.

Conventions: ``d`` is the player count (so the two-strategy fitness
polynomial has degree ``d - 1``) and ``t`` collects the strategy frequency
ratios ``t_i = x_i / x_n > 0``.
"""

from __future__ import annotations

import math
from collections import namedtuple
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import NumericalDegeneracyError
from .poly_core import GameDims, _log_weight_arrays, legendre_eval

__all__ = [
    "DensityPoint",
    "DensityBounds",
    "f2d_via_G",
    "f2d_closed",
    "f2d_via_legendre",
    "f2d_via_legendre_pair",
    "f2d",
    "g2d",
    "fn2",
    "fn2_bounds",
    "fnd_general",
    "fnd_general_batch",
    "f_elliptic",
    "f_elliptic_batch",
    "density_bounds",
]

# Above this player count the squared binomial coefficients no longer fit in
# doubles and evaluation switches to log-domain moments.
HORNER_DMAX = 500

DensityBounds = namedtuple("DensityBounds", ["bound_a", "bound_b", "bound_c"])


@dataclass(frozen=True)
class DensityPoint:
    """A density value at one ratio-coordinate point."""

    t: tuple
    value: float

    def __post_init__(self):
        if self.value < 0.0 or not math.isfinite(self.value):
            raise ValueError(f"density must be finite and >= 0, got {self.value}")


@lru_cache(maxsize=256)
def _weight_poly_floats(d):
    """Float coefficient arrays of A(s) = sum C(d-1,k)^2 s^k and its two
    derivatives, for the Horner evaluation route."""
    a = np.array([float(math.comb(d - 1, k) ** 2) for k in range(d)])
    a1 = a[1:] * np.arange(1, d)
    a2 = a1[1:] * np.arange(1, d - 1) if d > 2 else np.zeros(1)
    return a, a1, a2


def _f2d_G_batch(d, t):
    """Vectorized density of the two-strategy game via the weight-sum
    log-derivative: f = sqrt(Var_w k) / (pi t) with weights C(d-1,k)^2 t^2k.

    Reflects t > 1 through f(t) = f(1/t) / t^2 so the weight polynomial is
    only ever evaluated on s = t^2 <= 1.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    zero = t == 0.0
    out[zero] = (d - 1) / math.pi
    big = t > 1.0
    rest = ~zero & ~big
    for mask, tt in ((rest, t[rest]), (big, 1.0 / t[big])):
        if not tt.size:
            continue
        s = tt * tt
        if d <= HORNER_DMAX:
            a, a1, a2 = _weight_poly_floats(d)
            A = npoly.polyval(s, a)
            e1 = s * npoly.polyval(s, a1) / A
            ek2 = s * s * npoly.polyval(s, a2) / A + e1
        else:
            k = np.arange(d, dtype=float)
            _, logc2 = _log_weight_arrays(1, d - 1)
            e1 = np.empty_like(tt)
            ek2 = np.empty_like(tt)
            chunk = max(1, (1 << 22) // d)
            for i in range(0, tt.size, chunk):
                j = min(tt.size, i + chunk)
                logw = logc2.reshape(-1, 1) + 2.0 * np.outer(k, np.log(tt[i:j]))
                logw -= logw.max(axis=0)
                w = np.exp(logw)
                w /= w.sum(axis=0)
                e1[i:j] = k @ w
                ek2[i:j] = e1[i:j] ** 2 + np.einsum(
                    "kp,kp->p", w, (k[:, None] - e1[i:j]) ** 2
                )
        var = np.maximum(ek2 - e1 * e1, 0.0)
        with np.errstate(invalid="ignore", over="ignore"):
            vals = np.sqrt(var) / (math.pi * tt)
            vals = np.where(tt == 0.0, 0.0, vals)  # reflected t = inf
            if mask is big:
                vals = vals / (t[big] ** 2)
        out[mask] = vals
    return out


def _check_d(d):
    if not (isinstance(d, (int, np.integer)) and d >= 2):
        raise ValueError(f"d must be an integer >= 2, got {d}")
    return int(d)


def f2d_via_G(d, t):
    """Density of a d-player two-strategy game from the weight polynomial.

    Implements f = (1/2 pi) sqrt(G'(t)/t) with G = t d/dt log M_d(t),
    rewritten through the exact moment identities (G = 2 E_w[k],
    t G' = 4 Var_w[k]) so no numerical differentiation is involved.
    At t = 0 returns the exact boundary value (d-1)/pi.
    """
    d = _check_d(d)
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    return float(_f2d_G_batch(d, np.array([float(t)]))[0])


def f2d_closed(d, t):
    """Literal closed forms of the density for d = 2, 3, 4 (oracle only)."""
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    s = float(t) * float(t)
    if d == 2:
        return 1.0 / (math.pi * (1.0 + s))
    if d == 3:
        return 2.0 / math.pi * math.sqrt(1.0 + s + s * s) / (1.0 + 4.0 * s + s * s)
    if d == 4:
        num = math.sqrt(1.0 + 4.0 * s + 10.0 * s**2 + 4.0 * s**3 + s**4)
        return 3.0 / math.pi * num / (1.0 + 9.0 * s + 9.0 * s**2 + s**3)
    raise ValueError(f"closed form only available for d in {{2, 3, 4}}, got {d}")


def _legendre_frame(d, t):
    """Common setup for the Legendre formulations on 0 < t < 1."""
    D = d - 1
    s = t * t
    x = (1.0 + s) / (1.0 - s)
    return D, s, x, legendre_eval(D, x)


def f2d_via_legendre(d, t):
    """Density from the Legendre polynomial and its derivative.

    Uses (2 pi f_d)^2 = 4 D^2/(1-t^2)^2 - 16 t^2/(1-t^2)^4 (P_D'/P_D)^2 at
    the argument x = (1+t^2)/(1-t^2), D = d-1; arguments t > 1 are mapped
    into (0,1) by the inversion symmetry.  The formula degenerates at t = 0
    and t = 1, which are rejected.
    """
    d = _check_d(d)
    t = float(t)
    if t <= 0.0 or t == 1.0:
        raise ValueError(f"t must be positive and distinct from 1, got {t}")
    if t > 1.0:
        return f2d_via_legendre(d, 1.0 / t) / t**2
    D, s, x, leg = _legendre_frame(d, t)
    ratio = leg.dp / leg.p
    expr = 4.0 * D * D / (1.0 - s) ** 2 - 16.0 * s / (1.0 - s) ** 4 * ratio * ratio
    return math.sqrt(max(expr, 0.0)) / (2.0 * math.pi)


def f2d_via_legendre_pair(d, t):
    """Density from two consecutive Legendre polynomials (no derivative).

    (2 pi f_d)^2 = 4 D^2/(1-t^2)^2 - D^2/t^2 [ (1+t^2)/(1-t^2) -
    P_{D-1}/P_D ]^2 with D = d-1 at x = (1+t^2)/(1-t^2).
    """
    d = _check_d(d)
    t = float(t)
    if t <= 0.0 or t == 1.0:
        raise ValueError(f"t must be positive and distinct from 1, got {t}")
    if t > 1.0:
        return f2d_via_legendre_pair(d, 1.0 / t) / t**2
    D, s, x, leg = _legendre_frame(d, t)
    bracket = x - leg.p_prev / leg.p
    expr = 4.0 * D * D / (1.0 - s) ** 2 - D * D / s * bracket * bracket
    return math.sqrt(max(expr, 0.0)) / (2.0 * math.pi)


def f2d(d, t, formulation="auto"):
    """Two-strategy density with selectable formulation.

    ``auto`` routes to the weight-polynomial form near the removable
    singularity at t = 1 (where the Legendre forms cancel catastrophically),
    for very small t, and beyond the double-precision coefficient range;
    elsewhere it uses the two-polynomial Legendre form.
    """
    d = _check_d(d)
    t = float(t)
    if formulation == "auto":
        if t == 0.0 or abs(t - 1.0) < 1e-4 or t < 0.05 or d > HORNER_DMAX:
            formulation = "G"
        else:
            formulation = "legendre-pair"
    if formulation == "G":
        return f2d_via_G(d, t)
    if formulation == "legendre":
        return f2d_via_legendre(d, t)
    if formulation == "legendre-pair":
        return f2d_via_legendre_pair(d, t)
    if formulation == "closed":
        return f2d_closed(d, t)
    raise ValueError(f"unknown formulation {formulation!r}")


def g2d(d, y):
    """Density in frequency coordinates: g(y) = f(y/(1-y)) / (1-y)^2."""
    y = float(y)
    if not 0.0 < y < 1.0:
        raise ValueError(f"y must lie in (0, 1), got {y}")
    return f2d(d, y / (1.0 - y)) / (1.0 - y) ** 2


def _gamma_prefactor(n):
    return math.pi ** (-n / 2.0) * math.gamma(n / 2.0)


def fn2(n, t):
    """Closed-form density of the two-player n-strategy game.

    f(t) = pi^{-n/2} Gamma(n/2) (1 + sum t_k^2)^{-n/2}; at the origin this
    reduces to the boundary value pi^{-n/2} Gamma(n/2).
    """
    t = np.asarray(t, dtype=float).reshape(-1)
    if t.shape[0] != n - 1:
        raise ValueError(f"t must have length n-1 = {n - 1}")
    if np.any(t < 0.0):
        raise ValueError("components of t must be >= 0")
    return _gamma_prefactor(n) * float(1.0 + np.sum(t * t)) ** (-n / 2.0)


def fn2_bounds(n, t):
    """The two upper bounds C and C / (n^{n/2} prod t_i) for the verify suite."""
    t = np.asarray(t, dtype=float).reshape(-1)
    c = _gamma_prefactor(n)
    prod = float(np.prod(t))
    product_bound = c / (n ** (n / 2.0) * prod) if prod > 0.0 else math.inf
    return c, product_bound


def fnd_general_batch(dims, T, max_terms=None):
    """Vectorized general density over a batch of ratio points.

    ``T`` has shape (npoints, n-1), strictly positive entries.  Computes the
    covariance of the exponent weights in the log domain and returns
    pi^{-n/2} Gamma(n/2) sqrt(det Cov / prod t_i^2) per point.  A determinant
    below -1e-10 raises :class:`NumericalDegeneracyError`; rounding-level
    negatives are floored at zero.
    """
    kwargs = {} if max_terms is None else {"max_terms": max_terms}
    from .poly_core import exponent_vectors

    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or T.shape[1] != dims.n - 1:
        raise ValueError(f"T must have shape (npoints, {dims.n - 1})")
    if np.any(T <= 0.0):
        raise ValueError("all coordinates must be > 0")
    m = dims.n - 1
    K = exponent_vectors(m, dims.d - 1, **kwargs)
    _, logc2 = _log_weight_arrays(m, dims.d - 1)
    Kf = K.astype(float)
    eps = np.finfo(float).eps
    npts = T.shape[0]
    out = np.empty(npts)
    # chunk so the (terms x points x m) centered tensor stays modest
    chunk = max(1, (1 << 22) // max(K.shape[0] * m, 1))
    for lo in range(0, npts, chunk):
        hi = min(npts, lo + chunk)
        Tc = T[lo:hi]
        logw = logc2[:, None] + 2.0 * (Kf @ np.log(Tc).T)
        logw -= logw.max(axis=0)
        w = np.exp(logw)
        w /= w.sum(axis=0)
        m1 = Kf.T @ w                      # (m, P)
        # two-pass centered second moments: far better conditioned than
        # M2 - m m^T when the weights concentrate on a simplex face
        Kc = Kf[:, None, :] - m1.T[None, :, :]
        cov = np.einsum("tp,tpi,tpj->pij", w, Kc, Kc, optimize=True)
        det_cov = np.linalg.det(cov)
        det_L = det_cov / np.prod(Tc, axis=1) ** 2
        if np.any(det_L < -1e-10):
            worst = float(det_L.min())
            raise NumericalDegeneracyError(
                f"det L = {worst} is negative beyond tolerance at a sample point"
            )
        # rounding-noise floor: below ~eps * prod(variances) the determinant
        # carries no signal and would otherwise pollute the integrand with
        # Jacobian-amplified noise at extreme coordinates
        diag = np.diagonal(cov, axis1=1, axis2=2)
        noise = 64.0 * m * eps * np.prod(np.maximum(diag, eps), axis=1)
        det_cov = np.where(det_cov <= noise, 0.0, det_cov)
        det_L = det_cov / np.prod(Tc, axis=1) ** 2
        out[lo:hi] = np.sqrt(np.maximum(det_L, 0.0))
    return _gamma_prefactor(dims.n) * out


def fnd_general(dims, t, max_terms=None):
    """General density of a d-player n-strategy game at one ratio point.

    Reduces the covariance of the weighted exponent moments (see
    :func:`eqdense.poly_core.weighted_moments`) through the exact scaling
    L_ij = Cov_ij / (t_i t_j).
    """
    if not isinstance(dims, GameDims):
        dims = GameDims(*dims)
    t = np.asarray(t, dtype=float).reshape(1, -1)
    return float(fnd_general_batch(dims, t, max_terms=max_terms)[0])


def f_elliptic_batch(dims, T):
    """Vectorized elliptic-ensemble density (closed form)."""
    T = np.asarray(T, dtype=float)
    n, d = dims.n, dims.d
    ss = np.sum(T * T, axis=-1)
    return (
        _gamma_prefactor(n)
        * float(d - 1) ** ((n - 1) / 2.0)
        * (1.0 + ss) ** (-n / 2.0)
    )


def f_elliptic(dims, t):
    """Density of the elliptic (square-root-binomial) random system.

    f(t) = pi^{-n/2} Gamma(n/2) (d-1)^{(n-1)/2} / (1 + t.t)^{n/2}.  The
    matching count integral has the exact value (d-1)^{(n-1)/2}, which makes
    this the structural oracle for the quadrature pipeline.
    """
    if not isinstance(dims, GameDims):
        dims = GameDims(*dims)
    t = np.asarray(t, dtype=float).reshape(-1)
    if t.shape[0] != dims.n - 1:
        raise ValueError(f"t must have length n-1 = {dims.n - 1}")
    if np.any(t < 0.0):
        raise ValueError("components of t must be >= 0")
    return float(f_elliptic_batch(dims, t.reshape(1, -1))[0])


def density_bounds(d, t):
    """The three pointwise upper bounds on the two-strategy density.

    bound_a = sqrt(d-1)/(2 pi t), bound_b = (d-1)/pi, and the Legendre-route
    bound bound_c = (d-1)/(pi (1-t^2)) which is only defined for t < 1 (NaN
    otherwise).
    """
    d = _check_d(d)
    t = float(t)
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    bound_a = math.sqrt(d - 1) / (2.0 * math.pi * t) if t > 0.0 else math.inf
    bound_b = (d - 1) / math.pi
    bound_c = (d - 1) / (math.pi * (1.0 - t * t)) if t < 1.0 else math.nan
    return DensityBounds(bound_a, bound_b, bound_c)

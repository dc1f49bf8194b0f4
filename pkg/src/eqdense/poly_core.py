"""Polynomial and special-function primitives.

Everything downstream is built from four ingredients defined here:

* ``UniPoly`` -- dense univariate polynomials with either exact rational or
  float coefficients,
* exact multinomial coefficients,
* Legendre polynomials ``P_d`` evaluated by upward recurrence (the arguments
  of interest satisfy ``x >= 1`` where the recurrence is stable),
* the squared-coefficient weight sums ``S(t) = sum_k c_k^2 t^{2k}`` and their
  normalized first/second moments, computed in the log domain so they stay
  finite far beyond the range where the raw coefficients overflow doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CapacityError

__all__ = [
    "UniPoly",
    "GameDims",
    "WeightedMoments",
    "LegendreValue",
    "multinomial",
    "legendre_eval",
    "m_poly",
    "legendre_identity_residual",
    "weighted_moments",
    "exponent_vectors",
]

MAX_ENUM_TERMS = 10_000_000


class UniPoly:
    """Dense univariate polynomial, coefficients in ascending degree order.

    Coefficients are kept either all-exact (``Fraction``, automatically in
    lowest terms) or all-float; mixing promotes to float.  The zero
    polynomial has an empty coefficient tuple and degree ``-inf``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if any(isinstance(c, (float, np.floating)) for c in coeffs):
            self.coeffs = tuple(float(c) for c in coeffs)
        else:
            self.coeffs = tuple(
                c if isinstance(c, Fraction) else Fraction(c) for c in coeffs
            )

    @property
    def is_zero(self):
        return not self.coeffs

    @property
    def is_exact(self):
        return all(isinstance(c, Fraction) for c in self.coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def __call__(self, x):
        if not self.coeffs:
            return 0 * x
        if isinstance(x, (float, np.floating, np.ndarray)):
            acc = float(self.coeffs[-1]) + 0 * x
            for c in reversed(self.coeffs[:-1]):
                acc = acc * x + float(c)
            return acc
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return UniPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r})"


@dataclass(frozen=True)
class GameDims:
    """Dimensions of a game: ``n`` strategies, ``d`` players (both >= 2)."""

    n: int
    d: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 2):
            raise ValueError(f"strategy count n must be an integer >= 2, got {self.n}")
        if not (isinstance(self.d, int) and self.d >= 2):
            raise ValueError(f"player count d must be an integer >= 2, got {self.d}")


@dataclass(frozen=True)
class WeightedMoments:
    """Log-domain weight sum and normalized exponent moments.

    ``log_S`` is ``log sum_k c_k^2 prod_i t_i^{2 k_i}`` over all exponent
    vectors ``k`` with ``sum k_i <= d-1``; ``m[i]`` and ``M2[i][j]`` are the
    first and second moments of ``k`` under the normalized weights.
    """

    log_S: float
    m: np.ndarray
    M2: np.ndarray

    def covariance(self):
        return self.M2 - np.outer(self.m, self.m)


@dataclass(frozen=True)
class LegendreValue:
    """Value triple (P_d, P_{d-1}, P_d') at a common argument."""

    p: float
    p_prev: float
    dp: float


def multinomial(d_minus_1, k):
    """Exact multinomial coefficient ``(d-1)! / prod(k_i!)``.

    The final exponent is implicit: ``k_n = d-1 - sum(k)``.  Entries must be
    nonnegative and must not sum past ``d-1``.
    """
    if d_minus_1 < 0:
        raise ValueError("d-1 must be nonnegative")
    total = 0
    out = 1
    remaining = d_minus_1
    for ki in k:
        ki = int(ki)
        if ki < 0:
            raise ValueError(f"negative exponent {ki}")
        total += ki
        if total > d_minus_1:
            raise ValueError(f"exponents sum to {total} > d-1 = {d_minus_1}")
        out *= math.comb(remaining, ki)
        remaining -= ki
    return out


def legendre_eval(d, x):
    """Evaluate ``P_d``, ``P_{d-1}`` and ``P_d'`` at ``x``.

    Uses the three-term upward recurrence
    ``(k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}`` from ``P_0 = 1, P_1 = x``,
    which is stable for the ``|x| >= 1`` arguments this package needs.  The
    derivative comes from ``(x^2-1) P_d'(x) = d (x P_d - P_{d-1})`` away from
    ``|x| = 1`` and from the endpoint value ``P_d'(+-1)`` otherwise.
    Accepts scalars or arrays; overflow for huge ``d * x`` yields infinities.

    Parameters
    ----------
    d : int
        Polynomial order, >= 0.
    x : float or ndarray
        Evaluation point(s).
    """
    if d < 0:
        raise ValueError("order d must be >= 0")
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if d == 0:
        p = np.ones_like(xa)
        p_prev = np.zeros_like(xa)
        dp = np.zeros_like(xa)
    else:
        p_prev = np.ones_like(xa)
        p = xa.copy()
        # overflow to inf for huge d*x is the documented behavior
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            for k in range(1, d):
                p_prev, p = p, ((2 * k + 1) * xa * p - k * p_prev) / (k + 1)
            dp = d * (xa * p - p_prev) / (xa * xa - 1.0)
        # past the overflow point the recurrence yields inf - inf; restore
        # honest signed infinities (P_d grows without bound for |x| > 1)
        grown = np.isfinite(xa) & (np.abs(xa) > 1.0)
        for arr, order in ((p, d), (p_prev, d - 1), (dp, d + 1)):
            bad = grown & ~np.isfinite(arr)
            if np.any(bad):
                sign = np.where(xa > 0, 1.0, (-1.0) ** order)
                arr[bad] = (np.inf * sign)[bad]
        at_one = np.abs(np.abs(xa) - 1.0) == 0.0
        if np.any(at_one):
            endpoint = xa ** (d + 1) * (d * (d + 1) / 2.0)
            dp = np.where(at_one, endpoint, dp)
    if scalar:
        return LegendreValue(float(p[0]), float(p_prev[0]), float(dp[0]))
    return LegendreValue(p, p_prev, dp)


def m_poly(d):
    """The weight polynomial in ``s = t^2``: coefficient ``C(d-1,k)^2`` at ``s^k``.

    Exact integer coefficients; degree ``d-1``; palindromic.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    return UniPoly([math.comb(d - 1, k) ** 2 for k in range(d)])


def legendre_identity_residual(d, t):
    """Relative residual of ``M_{d+1}(t) = (1-t^2)^d P_d((1+t^2)/(1-t^2))``.

    Requires ``0 <= t < 1`` (the argument mapping is singular at ``t = 1``).
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t must lie in [0, 1), got {t}")
    s = t * t
    lhs = float(m_poly(d + 1)(float(s)))
    x = (1.0 + s) / (1.0 - s)
    rhs = (1.0 - s) ** d * legendre_eval(d, x).p
    return abs(lhs - rhs) / lhs


@lru_cache(maxsize=64)
def _exponent_cache(m, dmax):
    idx = []

    def rec(prefix, rem):
        if len(prefix) == m:
            idx.append(tuple(prefix))
            return
        for k in range(rem + 1):
            rec(prefix + (k,), rem - k)

    rec((), dmax)
    K = np.array(idx, dtype=np.int64)
    K.setflags(write=False)
    return K


def exponent_vectors(m, dmax, max_terms=MAX_ENUM_TERMS):
    """All exponent vectors ``k`` of length ``m`` with ``sum(k) <= dmax``.

    Lexicographic order, shape ``(T, m)`` with ``T = C(dmax+m, m)``.  Raises
    :class:`CapacityError` when ``T`` exceeds ``max_terms``.
    """
    count = math.comb(dmax + m, m)
    if count > max_terms:
        raise CapacityError(
            f"{count} exponent vectors exceed the cap of {max_terms}"
        )
    return _exponent_cache(m, dmax)


@lru_cache(maxsize=64)
def _log_weight_arrays(m, dmax):
    """(K, 2*log c_k) for the weight enumeration, cached per (m, d-1)."""
    K = _exponent_cache(m, dmax)
    lg = np.vectorize(math.lgamma)
    rest = dmax - K.sum(axis=1)
    logc = math.lgamma(dmax + 1) - lg(K + 1.0).sum(axis=1) - lg(rest + 1.0)
    logc2 = 2.0 * logc
    logc2.setflags(write=False)
    return K, logc2


def weighted_moments(dims, t, max_terms=MAX_ENUM_TERMS):
    """Normalized exponent moments of the squared-multinomial weights.

    For weights ``w_k = c_k^2 prod_i t_i^{2 k_i}`` (``c_k`` the multinomial
    coefficient, ``k`` over all exponent vectors with ``sum k_i <= d-1``)
    returns ``log S``, the first-moment vector ``E[k]`` and the second-moment
    matrix ``E[k k^T]``.  Weights are handled in the log domain with
    max-weight normalization, so the result stays valid where the raw
    coefficients would overflow.

    Parameters
    ----------
    dims : GameDims
    t : array_like
        Strictly positive vector of length ``n - 1``.
    """
    t = np.asarray(t, dtype=float).reshape(-1)
    mdim = dims.n - 1
    if t.shape[0] != mdim:
        raise ValueError(f"t must have length n-1 = {mdim}, got {t.shape[0]}")
    if np.any(t <= 0.0) or not np.all(np.isfinite(t)):
        raise ValueError("all coordinates of t must be finite and > 0")
    count = math.comb(dims.d - 1 + mdim, mdim)
    if count > max_terms:
        raise CapacityError(
            f"enumeration of {count} terms exceeds the cap of {max_terms}"
        )
    K, logc2 = _log_weight_arrays(mdim, dims.d - 1)
    logw = logc2 + 2.0 * (K @ np.log(t))
    shift = logw.max()
    w = np.exp(logw - shift)
    total = math.fsum(w)
    log_S = shift + math.log(total)
    w /= total
    m1 = w @ K
    M2 = (K * w[:, None]).T @ K.astype(float)
    M2 = 0.5 * (M2 + M2.T)
    return WeightedMoments(log_S=log_S, m=m1, M2=M2)

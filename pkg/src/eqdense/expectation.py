"""Expected equilibrium counts: quadrature of the densities and the
closed-form bounds that bracket them.

The count of a d-player n-strategy game is the integral of the density over
the positive orthant of ratio space.  One dimension integrates directly on
[0, 1] and doubles (inversion symmetry makes the two halves equal); higher
dimensions map the orthant onto the open unit cube with t = u/(1-u), whose
algebraically decaying tail the substitution absorbs exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import _f2d_G_batch, f_elliptic_batch, fnd_general_batch
from .errors import CapacityError
from .poly_core import GameDims
from .quadrature import integrate_box

__all__ = [
    "QuadratureConfig",
    "ExpectationResult",
    "expected_count_2d",
    "expected_count_nd",
    "elliptic_expected",
    "stable_expected_2d",
    "bernstein_expected",
    "upper_bound_E2",
    "lower_bound_E2",
    "asymptotic_ratio",
]

# integration capacity per strategy count, matching what the density
# enumeration can sustain
_ND_CAPS = {2: 100_000, 3: 400, 4: 20}


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budgets for adaptive panel quadrature."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_subdivisions: int = 200
    nodes_per_panel: int = 15

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be > 0")
        if self.nodes_per_panel < 2:
            raise ValueError("node count must be >= 2")
        if self.nodes_per_panel != 15:
            raise ValueError(
                "only the embedded 7/15 Gauss-Kronrod panel rule is available"
            )
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class ExpectationResult:
    """An integral estimate with its accumulated panel error."""

    value: float
    error_estimate: float
    dims: GameDims

    def __post_init__(self):
        if self.error_estimate < 0.0:
            raise ValueError("error estimate must be >= 0")
        if self.value < -self.error_estimate:
            raise ValueError("negative expected count")


def _cfg(cfg):
    return cfg if cfg is not None else QuadratureConfig()


def expected_count_2d(d, cfg=None):
    """E(2, d): expected number of internal equilibria, two strategies.

    Integrates 2 * int_0^1 f_d(t) dt; the inversion symmetry
    f(1/t) = t^2 f(t) makes the [1, inf) half equal to the [0, 1] half, so
    no tail truncation is involved.
    """
    cfg = _cfg(cfg)
    dims = GameDims(2, int(d))

    def integrand(pts):
        return _f2d_G_batch(dims.d, pts[:, 0])

    res = integrate_box(
        integrand,
        [0.0],
        [1.0],
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_subdivisions=cfg.max_subdivisions,
    )
    return ExpectationResult(2.0 * res.value, 2.0 * res.error, dims)


def _orthant_integral(density_batch, mdim, cfg):
    """Integrate a batched orthant density via t = u/(1-u) per axis."""
    u_max = np.nextafter(1.0, 0.0)  # deep panels can round a node onto 1.0

    def integrand(U):
        U = np.minimum(U, u_max)
        T = U / (1.0 - U)
        jac = np.prod((1.0 - U) ** -2.0, axis=1)
        return density_batch(T) * jac

    return integrate_box(
        integrand,
        [0.0] * mdim,
        [1.0] * mdim,
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_subdivisions=cfg.max_subdivisions,
    )


def expected_count_nd(dims, cfg=None):
    """E(n, d) by tensor-product adaptive quadrature of the general density.

    Supported ranges: n = 2 (any practical d), n = 3 up to d = 400, n = 4 up
    to d = 20; beyond that the term enumeration underneath the density is no
    longer affordable and a :class:`CapacityError` is raised.
    """
    if not isinstance(dims, GameDims):
        dims = GameDims(*dims)
    cfg = _cfg(cfg)
    cap = _ND_CAPS.get(dims.n)
    if cap is None:
        raise CapacityError(f"n = {dims.n} is out of integration capacity")
    if dims.d > cap:
        raise CapacityError(f"d = {dims.d} exceeds the n = {dims.n} cap of {cap}")
    res = _orthant_integral(
        lambda T: fnd_general_batch(dims, T), dims.n - 1, cfg
    )
    return ExpectationResult(res.value, res.error, dims)


def elliptic_expected(dims, cfg=None):
    """Expected real-zero count of the elliptic ensemble by quadrature.

    The elliptic density is even in every coordinate, so its full-space
    count is 2^{n-1} times the positive-orthant integral computed here.
    The exact answer is (d-1)^{(n-1)/2}, which makes this integral the
    end-to-end oracle for the whole quadrature pipeline.
    """
    if not isinstance(dims, GameDims):
        dims = GameDims(*dims)
    cfg = _cfg(cfg)
    res = _orthant_integral(
        lambda T: f_elliptic_batch(dims, T), dims.n - 1, cfg
    )
    fold = 2 ** (dims.n - 1)
    return ExpectationResult(fold * res.value, fold * res.error, dims)


def stable_expected_2d(d, cfg=None):
    """SE(2, d): each equilibrium is stable with probability 1/2, so this is
    E(2, d) / 2."""
    return expected_count_2d(d, cfg).value / 2.0


def bernstein_expected(d, cfg=None):
    """Expected real zeros of the degree d-1 random Bernstein polynomial.

    The fitness-difference polynomial of the two-strategy game is exactly a
    random Bernstein polynomial, and the density is even, so the full-line
    zero count is 2 E(2, d).
    """
    return 2.0 * expected_count_2d(d, cfg).value


def upper_bound_E2(d):
    """Explicit upper bound sqrt(d-1)/pi (1 + ln 2 + ln(d-1)/2) on E(2, d)."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return math.sqrt(d - 1) / math.pi * (1.0 + math.log(2.0) + 0.5 * math.log(d - 1))


def lower_bound_E2(d):
    """Explicit lower bound 2 f_d(1) = (d-1)/(pi sqrt(2d-3)) on E(2, d)."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return (d - 1) / (math.pi * math.sqrt(2 * d - 3))


def asymptotic_ratio(n, d, cfg=None):
    """ln E(n, d) / ln(d - 1), the quantity whose n = 2 limit is 1/2.

    Undefined at d = 2 where the denominator vanishes.
    """
    if d <= 2:
        raise ValueError("the ratio requires d >= 3")
    if n == 2:
        e = expected_count_2d(d, cfg).value
    else:
        e = expected_count_nd(GameDims(n, d), cfg).value
    return math.log(e) / math.log(d - 1)

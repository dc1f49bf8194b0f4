"""Monte Carlo sampling of random games with exact equilibrium counting.

Two sampling regimes are supported.  ``IndependentBeta`` draws the
payoff-difference coefficients directly as i.i.d. standard normals, which is
the hypothesis under which the density theory holds exactly.  ``PayoffAlpha``
draws one payoff entry per strategy and unordered opponent profile and forms
the differences, reproducing the correlated-coefficient ensemble used for
the published sampling tables; counts are invariant under positive scaling
of the coefficients, so the chosen standard deviation cannot affect the
means.

Every sample index owns its own counter-based RNG stream keyed by
(seed, index), so results are bit-identical for any worker count and any
partition of the work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from multiprocessing import get_context
from typing import Optional

import numpy as np

from .errors import DegenerateSystemError
from .poly_core import GameDims, exponent_vectors, multinomial
from .realroots import (
    BiPoly,
    RootBox,
    Stability,
    _lift_int,
    _positive_root_brackets,
    _squarefree_int,
    _strip_zero_root,
    _sturm_chain_int,
    _var_at_inf,
    _var_at_zero_plus,
    classify_stability_2,
    positive_system_roots,
)
from fractions import Fraction

__all__ = [
    "IndependentBeta",
    "PayoffAlpha",
    "MCConfig",
    "MCResult",
    "Histogram",
    "sample_game",
    "count_sample_2",
    "count_sample_3",
    "run_mc",
    "equilibria_histogram",
]


@dataclass(frozen=True)
class IndependentBeta:
    """Payoff differences drawn i.i.d. standard normal (theory ensemble)."""


@dataclass(frozen=True)
class PayoffAlpha:
    """Payoff entries drawn i.i.d. N(0, std^2) per unordered opponent
    profile; differences against the last strategy are correlated across
    equations."""

    std: float = 0.5

    def __post_init__(self):
        if not self.std > 0.0:
            raise ValueError("std must be > 0")


@dataclass(frozen=True)
class MCConfig:
    samples: int
    seed: int
    mode: object
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not isinstance(self.mode, (IndependentBeta, PayoffAlpha)):
            raise ValueError("mode must be IndependentBeta or PayoffAlpha")


@dataclass(frozen=True)
class Histogram:
    """Integer-count histogram over frequency coordinates."""

    edges: tuple
    counts: np.ndarray

    def density(self):
        """Counts normalized to a probability density over the binned box."""
        total = self.counts.sum()
        if total == 0:
            return np.zeros_like(self.counts, dtype=float)
        widths = [np.diff(e) for e in self.edges]
        area = widths[0]
        for w in widths[1:]:
            area = np.multiply.outer(area, w)
        return self.counts / (total * area)


@dataclass(frozen=True)
class MCResult:
    mean_count: float
    std_error: float
    stable_mean: Optional[float]
    histogram: Histogram
    samples_failed: int
    samples: int
    total_equilibria: int


def _rng_for_sample(seed, index):
    # counter-based stream: one Philox key per (seed, sample index)
    return np.random.Generator(
        np.random.Philox(key=np.array([seed, index], dtype=np.uint64))
    )


def sample_game(dims, mode, rng):
    """Draw one random game's payoff-difference coefficient tensor.

    Returns a length-d vector for two-strategy games, otherwise an
    (n-1, profiles) array whose columns follow the lexicographic order of
    :func:`eqdense.poly_core.exponent_vectors`.
    """
    if not isinstance(dims, GameDims):
        dims = GameDims(*dims)
    n, d = dims.n, dims.d
    profiles = math.comb(n + d - 2, d - 1)
    if isinstance(mode, IndependentBeta):
        beta = rng.standard_normal((n - 1, profiles))
    elif isinstance(mode, PayoffAlpha):
        alpha = rng.normal(0.0, mode.std, size=(n, profiles))
        beta = alpha[: n - 1] - alpha[n - 1]
    else:
        raise ValueError("mode must be IndependentBeta or PayoffAlpha")
    return beta[0] if n == 2 else beta


def _two_strategy_analysis(beta, d):
    """Exact positive-root count of the sampled fitness polynomial plus the
    stability class and frequency coordinate of every root."""
    binoms = [math.comb(d - 1, k) for k in range(d)]
    coeffs = [Fraction(float(b)) * c for b, c in zip(beta, binoms)]
    if not any(coeffs):
        raise DegenerateSystemError("identically zero fitness polynomial")
    ip = _lift_int(coeffs)
    ip, _ = _strip_zero_root(ip)
    if len(ip) <= 1:
        return 0, 0, []
    chain = _sturm_chain_int(ip)
    if len(chain[-1]) > 1:
        # multiple root (probability zero for sampled coefficients)
        ip = _squarefree_int(ip)
        chain = _sturm_chain_int(ip)
    count = _var_at_zero_plus(chain) - _var_at_inf(chain)
    if count == 0:
        return 0, 0, []
    brackets = _positive_root_brackets(chain, count)
    stable = 0
    ys = []
    for _, _, r in brackets:
        box = RootBox(Fraction(r) * Fraction(2**20 - 1, 2**20),
                      Fraction(r) * Fraction(2**20 + 1, 2**20))
        cls = classify_stability_2(np.asarray(beta, dtype=float), box, d)
        if cls is Stability.STABLE:
            stable += 1
        ys.append(r / (1.0 + r))
    return count, stable, ys


def count_sample_2(beta, d):
    """Count the internal equilibria of one sampled two-strategy game.

    Returns (count, stable_count); exact Sturm counting on the bit-exact
    rational lift of the float coefficients.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (d,):
        raise ValueError(f"beta must have length d = {d}")
    count, stable, _ = _two_strategy_analysis(beta, d)
    return count, stable


@lru_cache(maxsize=32)
def _bivariate_weights(d):
    K = exponent_vectors(2, d - 1)
    return K, [multinomial(d - 1, tuple(k)) for k in K]


def _three_strategy_polys(betas, d):
    K, weights = _bivariate_weights(d)
    polys = []
    for i in range(2):
        terms = {}
        for (k1, k2), w, b in zip(K, weights, betas[i]):
            terms[(int(k1), int(k2))] = Fraction(float(b)) * w
        poly = BiPoly(terms)
        if poly.is_zero:
            raise DegenerateSystemError("identically zero equation in system")
        polys.append(poly)
    return polys


def _three_strategy_analysis(betas, d):
    p1, p2 = _three_strategy_polys(betas, d)
    roots = positive_system_roots(p1, p2)
    ys = [(t1 / (1.0 + t1 + t2), t2 / (1.0 + t1 + t2)) for t1, t2 in roots]
    return len(roots), ys


def count_sample_3(betas, d):
    """Count the internal equilibria of one sampled three-strategy game."""
    betas = np.asarray(betas, dtype=float)
    if betas.shape[0] != 2:
        raise ValueError("betas must hold two coefficient vectors")
    if d > 5:
        raise ValueError("three-strategy sampling is supported for d <= 5")
    count, _ = _three_strategy_analysis(betas, d)
    return count


def _default_bins(n):
    return 50 if n == 2 else 24


def _mc_chunk(args):
    """Worker body: analyze samples [start, stop) and return merge-ready sums."""
    n, d, mode, seed, start, stop, nbins = args
    dims = GameDims(n, d)
    count_sum = 0
    count_sq = 0
    stable_sum = 0
    failed = 0
    if n == 2:
        hist = np.zeros(nbins, dtype=np.int64)
    else:
        hist = np.zeros((nbins, nbins), dtype=np.int64)
    for j in range(start, stop):
        rng = _rng_for_sample(seed, j)
        beta = sample_game(dims, mode, rng)
        try:
            if n == 2:
                c, s, ys = _two_strategy_analysis(beta, d)
                stable_sum += s
                for y in ys:
                    hist[min(int(y * nbins), nbins - 1)] += 1
            else:
                c, ys = _three_strategy_analysis(beta, d)
                for y1, y2 in ys:
                    hist[
                        min(int(y1 * nbins), nbins - 1),
                        min(int(y2 * nbins), nbins - 1),
                    ] += 1
        except DegenerateSystemError:
            failed += 1
            continue
        count_sum += c
        count_sq += c * c
    return count_sum, count_sq, stable_sum, failed, hist


def run_mc(dims, cfg, bins=None):
    """Sample cfg.samples random games and aggregate equilibrium statistics.

    Sampling is partitioned across workers by sample index; per-index RNG
    streams and integer merge arithmetic make the result independent of the
    worker count and scheduling.  Degenerate samples are skipped and tallied
    in ``samples_failed``: they are excluded from both the numerator and the
    denominator of every reported statistic.
    """
    if not isinstance(dims, GameDims):
        dims = GameDims(*dims)
    if dims.n not in (2, 3):
        raise ValueError("Monte Carlo sampling supports n = 2 or 3")
    if dims.n == 3 and dims.d > 5:
        raise ValueError("three-strategy sampling is supported for d <= 5")
    nbins = bins if bins is not None else _default_bins(dims.n)
    seed = int(cfg.seed)
    workers = cfg.workers
    bounds = np.linspace(0, cfg.samples, workers + 1).astype(int)
    tasks = [
        (dims.n, dims.d, cfg.mode, seed, int(a), int(b), nbins)
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]
    if workers == 1 or len(tasks) == 1:
        partials = [_mc_chunk(t) for t in tasks]
    else:
        with get_context("fork").Pool(processes=workers) as pool:
            partials = pool.map(_mc_chunk, tasks)
    count_sum = sum(p[0] for p in partials)
    count_sq = sum(p[1] for p in partials)
    stable_sum = sum(p[2] for p in partials)
    failed = sum(p[3] for p in partials)
    hist = sum((p[4] for p in partials), start=np.zeros_like(partials[0][4]))
    neff = cfg.samples - failed
    if neff <= 0:
        raise DegenerateSystemError("every sample was degenerate")
    mean = count_sum / neff
    if neff > 1:
        var = (count_sq - count_sum * count_sum / neff) / (neff - 1)
        se = math.sqrt(max(var, 0.0) / neff)
    else:
        se = math.inf
    edges = np.linspace(0.0, 1.0, nbins + 1)
    histogram = Histogram(
        edges=(edges,) if dims.n == 2 else (edges, edges.copy()),
        counts=hist,
    )
    return MCResult(
        mean_count=mean,
        std_error=se,
        stable_mean=(stable_sum / neff) if dims.n == 2 else None,
        histogram=histogram,
        samples_failed=failed,
        samples=cfg.samples,
        total_equilibria=count_sum,
    )


def equilibria_histogram(dims, cfg, bins=50):
    """Histogram of equilibrium locations in frequency coordinates.

    Returns the raw-count :class:`Histogram`; use ``.density()`` for the
    normalized version comparable against the frequency-coordinate density.
    """
    return run_mc(dims, cfg, bins=bins).histogram

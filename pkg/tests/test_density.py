import math

import numpy as np
import pytest

from eqdense.density import (
    DensityPoint,
    _f2d_G_batch,
    density_bounds,
    f2d,
    f2d_closed,
    f2d_via_G,
    f2d_via_legendre,
    f2d_via_legendre_pair,
    f_elliptic,
    fn2,
    fn2_bounds,
    fnd_general,
    fnd_general_batch,
    g2d,
)
from eqdense.poly_core import GameDims

GRID = np.concatenate([np.geomspace(0.011, 0.989, 20), np.geomspace(1.013, 97.0, 20)])


class TestTwoStrategyAnchors:
    def test_f2_at_1(self):
        assert abs(f2d_via_G(2, 1.0) - 1 / (2 * math.pi)) < 1e-16

    def test_f3_at_1(self):
        assert abs(f2d_via_G(3, 1.0) - 1 / (math.pi * math.sqrt(3))) < 1e-15

    def test_f4_at_0(self):
        assert f2d_via_G(4, 0.0) == 3 / math.pi

    def test_anchors_to_d100(self):
        for d in range(2, 101):
            f0 = f2d_via_G(d, 0.0)
            assert abs(f0 - (d - 1) / math.pi) <= 1e-12 * f0
            f1 = f2d_via_G(d, 1.0)
            ref = (d - 1) / (2 * math.pi * math.sqrt(2 * d - 3))
            assert abs(f1 - ref) <= 1e-12 * ref

    def test_rejects_negative_t(self):
        with pytest.raises(ValueError):
            f2d_via_G(3, -0.5)
        with pytest.raises(ValueError):
            f2d_via_G(1, 0.5)


class TestClosedForms:
    def test_f3_at_0(self):
        assert abs(f2d_closed(3, 0.0) - 2 / math.pi) < 1e-16

    def test_f4_at_1(self):
        assert abs(f2d_closed(4, 1.0) - 3 / (math.pi * math.sqrt(20))) < 1e-16

    def test_f2_vanishes_at_infinity(self):
        assert f2d_closed(2, 1e8) < 1e-15

    def test_only_small_d(self):
        with pytest.raises(ValueError):
            f2d_closed(5, 0.5)

    def test_matches_G_route(self):
        for d in (2, 3, 4):
            for t in GRID:
                a, b = f2d_closed(d, float(t)), f2d_via_G(d, float(t))
                assert abs(a - b) <= 1e-12 * b


class TestLegendreFormulations:
    def test_legendre_matches_closed(self):
        assert abs(f2d_via_legendre(3, 0.5) - f2d_closed(3, 0.5)) < 1e-12

    def test_legendre_f2_value(self):
        assert abs(f2d_via_legendre(2, 0.5) - 1 / (math.pi * 1.25)) < 1e-15

    def test_inversion_used_above_1(self):
        a = f2d_via_legendre(10, 2.0)
        b = 0.25 * f2d_via_legendre(10, 0.5)
        assert abs(a - b) < 1e-15

    def test_pair_matches_G(self):
        assert abs(f2d_via_legendre_pair(4, 0.3) - f2d_via_G(4, 0.3)) < 1e-12

    def test_pair_f2_value(self):
        assert abs(f2d_via_legendre_pair(2, 0.5) - 1 / (math.pi * 1.25)) < 1e-15

    def test_pair_matches_legendre_d50(self):
        a = f2d_via_legendre_pair(50, 0.9)
        b = f2d_via_legendre(50, 0.9)
        assert abs(a - b) <= 1e-10 * b

    def test_rejects_singular_points(self):
        for fn in (f2d_via_legendre, f2d_via_legendre_pair):
            with pytest.raises(ValueError):
                fn(5, 0.0)
            with pytest.raises(ValueError):
                fn(5, 1.0)

    def test_formulation_equivalence_grid(self):
        # all four evaluators agree to 1e-9 relative for d <= 60
        worst = 0.0
        for d in range(2, 61):
            for t in GRID:
                ref = f2d_via_G(d, float(t))
                vals = [
                    f2d_via_legendre(d, float(t)),
                    f2d_via_legendre_pair(d, float(t)),
                ]
                if d <= 4:
                    vals.append(f2d_closed(d, float(t)))
                worst = max(worst, max(abs(v - ref) for v in vals) / ref)
        assert worst < 1e-9


class TestDispatcher:
    def test_near_one_routes_to_G(self):
        # legendre forms reject t = 1 but the dispatcher must not
        assert f2d(7, 1.0) == f2d_via_G(7, 1.0)
        assert abs(f2d(7, 1.0 + 1e-5) - f2d_via_G(7, 1.0 + 1e-5)) < 1e-15

    def test_explicit_formulations(self):
        assert f2d(3, 0.5, "closed") == f2d_closed(3, 0.5)
        assert f2d(3, 0.5, "legendre") == f2d_via_legendre(3, 0.5)
        with pytest.raises(ValueError):
            f2d(3, 0.5, "nope")

    def test_large_d_uses_moment_route(self):
        val = f2d(2000, 0.3)
        assert math.isfinite(val) and val > 0


class TestMonotonicityAndSymmetry:
    def test_decreasing_in_t(self):
        for d in (2, 5, 17, 60):
            grid = np.concatenate([[0.0], np.geomspace(1e-3, 50.0, 200)])
            vals = _f2d_G_batch(d, grid)
            assert np.all(np.diff(vals) <= 1e-12 * vals[0])

    def test_inversion_symmetry(self):
        for d in (2, 7, 33, 100):
            for t in GRID:
                lhs = f2d_via_G(d, 1.0 / float(t))
                rhs = float(t) ** 2 * f2d_via_G(d, float(t))
                assert abs(lhs - rhs) <= 1e-10 * rhs

    def test_scaled_density_decreasing_in_d(self):
        for t in (0.0, 0.1, 0.7, 1.0, 3.0):
            seq = [f2d_via_G(d, t) / (d - 1) for d in range(2, 61)]
            assert np.all(np.diff(seq) <= 1e-12 * seq[0])

    def test_g_symmetry(self):
        for d in (2, 6, 19):
            for y in np.linspace(0.05, 0.45, 9):
                assert abs(g2d(d, float(y)) - g2d(d, 1.0 - float(y))) <= 1e-12 * g2d(d, float(y))

    def test_g_values(self):
        assert abs(g2d(2, 0.5) - 2 / math.pi) < 1e-15
        assert abs(g2d(3, 0.5) - 4 / (math.pi * math.sqrt(3))) < 1e-15
        with pytest.raises(ValueError):
            g2d(3, 1.0)

    def test_sandwich_ratio(self):
        # f_d(t)/sqrt(d-1) stays inside fixed empirical constants
        brackets = {0.1: (0.60, 0.70), 0.5: (0.20, 0.23),
                    1.0: (0.105, 0.120), 2.0: (0.050, 0.057)}
        for t, (lo, hi) in brackets.items():
            for d in (10, 100, 1000, 10000):
                r = f2d_via_G(d, t) / math.sqrt(d - 1)
                assert lo <= r <= hi, (t, d, r)


class TestBounds:
    def test_bound_values(self):
        ba, bb, bc = density_bounds(5, 0.0)
        assert bb == 4 / math.pi and math.isinf(ba)
        assert abs(density_bounds(10, 2.0).bound_a - 3 / (4 * math.pi)) < 1e-16
        assert abs(density_bounds(3, 0.5).bound_c - 8 / (3 * math.pi)) < 1e-15
        assert math.isnan(density_bounds(3, 1.5).bound_c)

    def test_flat_bound_attained_at_zero(self):
        assert f2d_via_G(5, 0.0) == density_bounds(5, 0.0).bound_b

    def test_density_below_bounds(self):
        for d in (2, 3, 10, 47, 100):
            for t in np.concatenate([[0.0], GRID]):
                f = f2d_via_G(d, float(t))
                ba, bb, bc = density_bounds(d, float(t))
                assert f <= bb * (1 + 1e-12)
                if t > 0:
                    assert f <= ba * (1 + 1e-12)
                if t < 1:
                    assert f <= bc * (1 + 1e-12)


class TestTwoPlayer:
    def test_boundary_values(self):
        assert abs(fn2(2, [0.0]) - 1 / math.pi) < 1e-16
        assert abs(fn2(4, [0.0, 0.0, 0.0]) - 1 / math.pi**2) < 1e-16

    def test_symmetric_point(self):
        v = fn2(3, (1.0, 1.0))
        assert abs(v - math.pi**-1.5 * math.gamma(1.5) / 3**1.5) < 1e-16

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            fn2(3, (-1.0, 1.0))

    def test_bounds(self):
        rng = np.random.default_rng(2)
        for n in (2, 3, 4):
            for _ in range(40):
                t = np.exp(rng.normal(0, 1, n - 1))
                f = fn2(n, t)
                b1, b2 = fn2_bounds(n, t)
                assert f <= b1 * (1 + 1e-12) and f <= b2 * (1 + 1e-12)


class TestGeneralDensity:
    def test_reduces_to_two_strategy(self):
        for d in (2, 3, 10, 50, 100):
            a = fnd_general(GameDims(2, d), [0.7])
            b = f2d_via_G(d, 0.7)
            assert abs(a - b) <= 1e-10 * b

    def test_reduces_to_two_player(self):
        a = fnd_general(GameDims(3, 2), (1.0, 1.0))
        assert abs(a - fn2(3, (1.0, 1.0))) <= 1e-12 * a
        rng = np.random.default_rng(6)
        for n in (3, 4):
            for _ in range(10):
                t = np.exp(rng.normal(0, 1, n - 1))
                a, b = fnd_general(GameDims(n, 2), t), fn2(n, t)
                assert abs(a - b) <= 1e-10 * b

    def test_two_player_product_bound(self):
        for t1, t2 in ((30.0, 40.0), (100.0, 5.0)):
            val = fnd_general(GameDims(3, 2), (t1, t2))
            bound = math.pi**-1.5 * math.gamma(1.5) / (3**1.5 * t1 * t2)
            assert val <= bound * (1 + 1e-12)

    def test_batch_matches_scalar(self):
        dims = GameDims(3, 7)
        T = np.array([[0.3, 1.4], [2.0, 0.1], [1.0, 1.0]])
        batch = fnd_general_batch(dims, T)
        for i, t in enumerate(T):
            assert abs(batch[i] - fnd_general(dims, t)) <= 1e-13 * batch[i]

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            fnd_general(GameDims(3, 4), (0.0, 1.0))


class TestElliptic:
    def test_values(self):
        assert abs(f_elliptic(GameDims(2, 5), [0.0]) - 2 / math.pi) < 1e-16
        assert abs(f_elliptic(GameDims(3, 2), [0.0, 0.0]) - 1 / (2 * math.pi)) < 1e-16

    def test_d2_identical_to_two_strategy(self):
        for t in (0.0, 0.3, 1.0, 4.0):
            a = f_elliptic(GameDims(2, 2), [t])
            assert abs(a - f2d_closed(2, t)) < 1e-15


class TestDensityPoint:
    def test_validation(self):
        DensityPoint(t=(0.5,), value=0.1)
        with pytest.raises(ValueError):
            DensityPoint(t=(0.5,), value=-1.0)
        with pytest.raises(ValueError):
            DensityPoint(t=(0.5,), value=math.inf)

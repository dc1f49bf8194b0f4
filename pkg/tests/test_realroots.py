import math
from fractions import Fraction

import numpy as np
import pytest

from eqdense.errors import CapacityError, DegenerateSystemError
from eqdense.poly_core import UniPoly
from eqdense.realroots import (
    BiPoly,
    RootBox,
    Stability,
    classify_stability_2,
    count_positive_roots,
    count_positive_system_roots,
    isolate_positive_roots,
    positive_system_roots,
    squarefree,
    sturm_chain,
    sylvester_resultant,
    verify_m_factorization,
)


def poly_from_roots(roots):
    p = UniPoly([1])
    for r in roots:
        p = p * UniPoly([-Fraction(r), 1])
    return p


class TestSquarefree:
    def test_double_root_drops(self):
        sq = squarefree(UniPoly([1, -2, 1]))
        assert sq.degree == 1
        assert sq(Fraction(1)) == 0

    def test_already_squarefree(self):
        p = UniPoly([2, -3, 1])
        assert squarefree(p).coeffs == p.coeffs

    def test_zero_root_multiplicity(self):
        # t^3 - t^2 has gcd t with its derivative
        sq = squarefree(UniPoly([0, 0, -1, 1]))
        assert sq.degree == 2
        assert sq(Fraction(0)) == 0 and sq(Fraction(1)) == 0

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            squarefree(UniPoly([]))


class TestCountPositiveRoots:
    def test_two_roots(self):
        assert count_positive_roots(UniPoly([2, -3, 1])) == 2

    def test_no_real_roots(self):
        assert count_positive_roots(UniPoly([1, 0, 1])) == 0

    def test_three_rational_roots(self):
        assert count_positive_roots(UniPoly([-1, 6, -11, 6])) == 3

    def test_root_at_zero_excluded(self):
        # t (t - 1): only the root at 1 counts
        assert count_positive_roots(UniPoly([0, -1, 1])) == 1

    def test_negative_roots_excluded(self):
        assert count_positive_roots(poly_from_roots([-1, -2, 3])) == 1

    def test_multiple_roots_counted_once(self):
        assert count_positive_roots(UniPoly([1, -2, 1])) == 1

    def test_planted_rational_roots(self):
        # exactness on random rational root multisets, degree <= 12
        rng = np.random.default_rng(987)
        for _ in range(60):
            deg = int(rng.integers(1, 13))
            roots = []
            for _ in range(deg):
                num = int(rng.integers(-30, 31))
                den = int(rng.integers(1, 12))
                roots.append(Fraction(num, den))
            expected = len({r for r in roots if r > 0})
            assert count_positive_roots(poly_from_roots(roots)) == expected

    def test_float_lift_vs_sampling_oracle(self):
        # Sturm on the exact lift of float coefficients vs dense sign-change
        # sampling refined by bisection
        rng = np.random.default_rng(321)
        for _ in range(150):
            deg = int(rng.integers(1, 9))
            coeffs = rng.standard_normal(deg + 1)
            exact = count_positive_roots(UniPoly(list(coeffs)))
            bound = 1.0 + np.max(np.abs(coeffs[:-1])) / abs(coeffs[-1])
            grid = np.concatenate(
                [np.geomspace(1e-7, min(bound, 1e3), 150_000), [min(bound, 1e3)]]
            )
            vals = np.polynomial.polynomial.polyval(grid, coeffs)
            signs = np.sign(vals)
            signs = signs[signs != 0]
            sampled = int(np.sum(signs[1:] != signs[:-1]))
            if coeffs[0] * vals[0] < 0:  # crossing below the first grid point
                sampled += 1
            assert exact == sampled, coeffs


class TestIsolation:
    def test_sqrt2_box(self):
        boxes = isolate_positive_roots(UniPoly([-2, 0, 1]), Fraction(1, 10**6))
        assert len(boxes) == 1
        assert float(boxes[0].lo) < math.sqrt(2) < float(boxes[0].hi)
        assert boxes[0].hi - boxes[0].lo <= Fraction(1, 10**6)

    def test_two_boxes(self):
        boxes = isolate_positive_roots(UniPoly([2, -3, 1]))
        assert len(boxes) == 2
        mids = sorted(b.midpoint for b in boxes)
        assert abs(mids[0] - 1) < 1e-6 and abs(mids[1] - 2) < 1e-6

    def test_wilkinson_six(self):
        p = poly_from_roots([1, 2, 3, 4, 5, 6])
        boxes = isolate_positive_roots(p)
        assert len(boxes) == 6
        assert count_positive_roots(p) == 6

    def test_boxes_disjoint_and_match_count(self):
        rng = np.random.default_rng(55)
        for _ in range(25):
            deg = int(rng.integers(2, 9))
            p = UniPoly(list(rng.standard_normal(deg + 1)))
            boxes = isolate_positive_roots(p)
            assert len(boxes) == count_positive_roots(p)
            for a, b in zip(boxes, boxes[1:]):
                assert a.hi <= b.lo

    def test_multiplicities(self):
        p = poly_from_roots([1, 1, 2, 2, 2, -1])
        boxes = isolate_positive_roots(p)
        assert {round(b.midpoint): b.multiplicity for b in boxes} == {1: 2, 2: 3}

    def test_rejects_bad_width(self):
        with pytest.raises(ValueError):
            isolate_positive_roots(UniPoly([2, -3, 1]), 0)


class TestSturmChain:
    def test_chain_shape(self):
        chain = sturm_chain(UniPoly([2, -3, 1]))
        assert len(chain) == 3
        assert chain.polys[0].degree == 2
        assert chain.polys[-1].degree == 0

    def test_successive_degrees_decrease(self):
        rng = np.random.default_rng(8)
        p = UniPoly(list(rng.standard_normal(7)))
        chain = sturm_chain(p)
        degs = [q.degree for q in chain.polys]
        assert all(a > b for a, b in zip(degs, degs[1:]))


class TestSylvesterResultant:
    def test_intersecting_lines(self):
        p1 = BiPoly({(1, 0): -1, (0, 1): 1})          # t2 - t1
        p2 = BiPoly({(1, 0): 1, (0, 1): 1, (0, 0): -2})  # t2 + t1 - 2
        res = sylvester_resultant(p1, p2, eliminate=1)
        # a constant multiple of (t1 - 1)
        assert res.degree == 1
        assert res(Fraction(1)) == 0

    def test_hyperbola_and_line(self):
        res = sylvester_resultant(
            BiPoly({(1, 1): 1, (0, 0): -1}), BiPoly({(0, 1): 1, (1, 0): -1}), 1
        )
        # constant multiple of t1^2 - 1
        assert res.degree == 2
        assert res(Fraction(1)) == 0 and res(Fraction(-1)) == 0

    def test_constant_against_poly(self):
        res = sylvester_resultant(
            BiPoly({(0, 0): 1}), BiPoly({(0, 1): 1, (1, 0): -1}), 1
        )
        assert res.degree == 0 and res.coeffs[0] != 0

    def test_both_constant_rejected(self):
        with pytest.raises(ValueError):
            sylvester_resultant(BiPoly({(0, 0): 1}), BiPoly({(1, 0): 2}), 1)

    def test_methods_agree(self):
        rng = np.random.default_rng(77)
        for _ in range(25):
            t1 = {(int(i), int(j)): float(rng.standard_normal())
                  for i in range(3) for j in range(3) if i + j <= 3}
            t2 = {(int(i), int(j)): float(rng.standard_normal())
                  for i in range(3) for j in range(3) if i + j <= 3}
            p1, p2 = BiPoly(t1), BiPoly(t2)
            a = sylvester_resultant(p1, p2, 1, method="bareiss")
            b = sylvester_resultant(p1, p2, 1, method="interp")
            assert a.coeffs == b.coeffs

    def test_eliminate_first_axis(self):
        p1 = BiPoly({(1, 0): -1, (0, 1): 1})
        p2 = BiPoly({(1, 0): 1, (0, 1): 1, (0, 0): -2})
        res = sylvester_resultant(p1, p2, eliminate=0)
        assert res.degree == 1
        assert res(Fraction(1)) == 0  # common root has t2 = 1


class TestSystemRoots:
    def test_symmetric_pair(self):
        roots = positive_system_roots(
            BiPoly({(1, 0): 1, (0, 1): 1, (0, 0): -3}),
            BiPoly({(1, 1): 1, (0, 0): -2}),
        )
        assert len(roots) == 2
        roots = sorted(roots)
        assert abs(roots[0][0] - 1) < 1e-9 and abs(roots[0][1] - 2) < 1e-9
        assert abs(roots[1][0] - 2) < 1e-9 and abs(roots[1][1] - 1) < 1e-9

    def test_negative_orthant_root_excluded(self):
        count = count_positive_system_roots(
            BiPoly({(1, 0): 1, (0, 1): -1}),
            BiPoly({(1, 0): 1, (0, 1): 1, (0, 0): 1}),
        )
        assert count == 0

    def test_degenerate_rejected(self):
        p = BiPoly({(1, 0): 1, (0, 1): -1})
        with pytest.raises(DegenerateSystemError):
            count_positive_system_roots(p, p)

    def test_capacity(self):
        big = BiPoly({(33, 0): 1, (0, 1): 1})
        with pytest.raises(CapacityError):
            count_positive_system_roots(big, big)

    def test_planted_linear_factors(self):
        # systems built from linear factors, expected count enumerated exactly
        rng = np.random.default_rng(4242)
        for _ in range(40):
            k1 = int(rng.integers(1, 4))
            k2 = int(rng.integers(1, 4))
            lines1 = [
                (Fraction(int(rng.integers(1, 8)), int(rng.integers(1, 5))),
                 Fraction(int(rng.integers(1, 8)), int(rng.integers(1, 5))),
                 Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5))))
                for _ in range(k1)
            ]
            lines2 = [
                (Fraction(int(rng.integers(1, 8)), int(rng.integers(1, 5))),
                 Fraction(int(rng.integers(-8, -1)), int(rng.integers(1, 5))),
                 Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 5))))
                for _ in range(k2)
            ]

            def build(lines):
                p = BiPoly({(0, 0): 1})
                for a, b, c in lines:
                    p = p * BiPoly({(1, 0): a, (0, 1): b, (0, 0): c})
                return p

            # exact expected count: pairwise line intersections in the open
            # positive quadrant, deduplicated
            pts = set()
            for a1, b1, c1 in lines1:
                for a2, b2, c2 in lines2:
                    det = a1 * b2 - a2 * b1
                    if det == 0:
                        continue
                    x = (-c1 * b2 + c2 * b1) / det
                    y = (-a1 * c2 + a2 * c1) / det
                    if x > 0 and y > 0:
                        pts.add((x, y))
            got = count_positive_system_roots(build(lines1), build(lines2))
            assert got == len(pts), (lines1, lines2, got, len(pts))


class TestMFactorization:
    def test_d2_unit_root(self):
        # M_2(s) = 1 + s has the single root s = -1, so r = {1}
        res = verify_m_factorization(2, [0.3, 0.8])
        assert res < 1e-12
        boxes = isolate_positive_roots(UniPoly([1, -1]))  # M_2(-s)
        assert len(boxes) == 1 and abs(boxes[0].midpoint - 1.0) < 1e-6

    def test_d3_roots(self):
        # s^2 + 4 s + 1 = 0 at s = -2 +- sqrt(3), so r = {2 -+ sqrt(3)}
        res = verify_m_factorization(3, [0.5])
        assert res < 1e-9
        boxes = isolate_positive_roots(UniPoly([1, -4, 1]))  # M_3(-s)
        rs = sorted(b.midpoint for b in boxes)
        assert abs(rs[0] - (2 - math.sqrt(3))) < 1e-6
        assert abs(rs[1] - (2 + math.sqrt(3))) < 1e-6

    def test_residual_scan(self):
        for d in range(2, 13):
            assert verify_m_factorization(d, list(np.arange(0.1, 1.0, 0.2))) < 1e-8


class TestStability:
    def test_decreasing_advantage_is_stable(self):
        box = RootBox(Fraction(9, 10), Fraction(11, 10))
        assert classify_stability_2([1.0, -1.0], box, 2) is Stability.STABLE

    def test_sign_flip_is_unstable(self):
        box = RootBox(Fraction(9, 10), Fraction(11, 10))
        assert classify_stability_2([-1.0, 1.0], box, 2) is Stability.UNSTABLE

    def test_double_root_indeterminate(self):
        # beta (1, -1, 1) gives the squared factor (1 - t)^2: B'(y*) = 0
        box = RootBox(Fraction(9, 10), Fraction(11, 10))
        assert classify_stability_2([1.0, -1.0, 1.0], box, 3) is Stability.INDETERMINATE

    def test_validates_length(self):
        box = RootBox(Fraction(1, 2), Fraction(2, 3))
        with pytest.raises(ValueError):
            classify_stability_2([1.0, 2.0], box, 3)

"""Exact real-root counting, isolation, and bivariate system solving.

Root counts are computed with Sturm sequences in exact integer arithmetic:
input coefficients (including sampled floats, which are dyadic rationals) are
lifted bit-for-bit to rationals, cleared to a primitive integer polynomial,
and the signed pseudo-remainder chain is built with content normalization
after every step to contain coefficient growth.  Counting is therefore
deterministic and exact; only the final refinement of isolated roots to
floating point is approximate.

Bivariate systems are solved by eliminating one variable with a Sylvester
resultant (fraction-free Bareiss elimination over the polynomial ring, with
an exact evaluation/interpolation route for larger matrices), isolating the
positive roots of the resultant, and back-substituting numerically with a
residual gate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import gmpy2
from gmpy2 import mpz

from .errors import CapacityError, DegenerateSystemError, VerificationFailure
from .poly_core import UniPoly, m_poly

__all__ = [
    "Stability",
    "SturmChain",
    "RootBox",
    "BiPoly",
    "sturm_chain",
    "squarefree",
    "count_positive_roots",
    "isolate_positive_roots",
    "sylvester_resultant",
    "count_positive_system_roots",
    "positive_system_roots",
    "verify_m_factorization",
    "classify_stability_2",
]

MAX_SYSTEM_DEGREE = 32


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    INDETERMINATE = "indeterminate"


# ---------------------------------------------------------------------------
# integer polynomial kernels (dense lists of mpz, ascending degree)
# ---------------------------------------------------------------------------

def _lift_int(coeffs):
    """Exact lift of rational/float coefficients to a primitive mpz list."""
    fracs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
    den = mpz(1)
    for f in fracs:
        den = gmpy2.lcm(den, f.denominator)
    out = [mpz(f.numerator) * (den // f.denominator) for f in fracs]
    while out and not out[-1]:
        out.pop()
    return _prim(out)


def _content(p):
    g = mpz(0)
    for c in p:
        if c:
            g = gmpy2.gcd(g, c)
            if g == 1:
                return g
    return g if g else mpz(1)


def _prim(p):
    g = _content(p)
    return [c // g for c in p] if g > 1 else list(p)


def _deriv(p):
    return [i * c for i, c in enumerate(p)][1:]


def _strip_zero_root(p):
    """Factor out t^k; returns (reduced, k)."""
    k = 0
    while p and p[0] == 0:
        p = p[1:]
        k += 1
    return p, k


def _pseudo_rem_signed(a, b):
    """Pseudo-remainder of a by b equal to rem(a, b) times a positive constant."""
    da, db = len(a) - 1, len(b) - 1
    lcb = b[-1]
    r = list(a)
    for i in range(da - db, -1, -1):
        c = r[i + db]
        for j in range(i + db):
            r[j] *= lcb
        if c:
            for j in range(db):
                r[i + j] -= c * b[j]
        del r[i + db]
    while r and not r[-1]:
        r.pop()
    if (da - db + 1) % 2 == 1 and lcb < 0:
        r = [-x for x in r]
    return r


def _sturm_chain_int(p):
    """Primitive signed-remainder chain [p, p', -rem(p, p'), ...]."""
    chain = [list(p)]
    d1 = _prim(_deriv(p))
    if d1:
        chain.append(d1)
    while len(chain) >= 2 and len(chain[-1]) > 1:
        r = _pseudo_rem_signed(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_prim([-c for c in r]))
    return chain


def _sgn(x):
    return 1 if x > 0 else (-1 if x < 0 else 0)


def _variations(signs):
    v, prev = 0, 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


def _var_at_zero_plus(chain):
    # sign of each element just right of 0 is the sign of its lowest nonzero coeff
    return _variations(
        [next((_sgn(c) for c in p if c), 0) for p in chain]
    )


def _var_at_inf(chain):
    return _variations([_sgn(p[-1]) if p else 0 for p in chain])


def _eval_homog(p, num, den):
    """p(num/den) * den^deg(p), exact (den > 0)."""
    acc = mpz(p[-1])
    dpow = mpz(1)
    for c in reversed(p[:-1]):
        dpow *= den
        acc = acc * num + c * dpow
    return acc


def _sign_at(p, q):
    """Exact sign of p at the rational point q."""
    return _sgn(_eval_homog(p, mpz(q.numerator), mpz(q.denominator)))


def _var_at(chain, q):
    num, den = mpz(q.numerator), mpz(q.denominator)
    return _variations([_sgn(_eval_homog(p, num, den)) for p in chain])


def _root_bound(p):
    """Power-of-two Cauchy bound: every real root is < 2^B."""
    lead = abs(p[-1])
    worst = max(abs(c) for c in p[:-1]) if len(p) > 1 else mpz(1)
    B = max(1, worst.bit_length() - lead.bit_length() + 2)
    return Fraction(2) ** B


def _float_root_candidates(p):
    """Approximate positive real roots via a scaled float companion solve."""
    mb = max(abs(c).bit_length() for c in p)
    shift = mpz(1) << max(0, mb - 500)
    fc = np.array([float(gmpy2.mpq(c, shift)) for c in p][::-1])
    if not np.any(fc != 0.0):
        return []
    roots = np.roots(fc)
    out = [
        float(r.real)
        for r in roots
        if abs(r.imag) <= 1e-7 * (1.0 + abs(r.real)) and r.real > 0.0
    ]
    return sorted(out)


def _nonroot_split(p, lo, hi):
    """A dyadic point inside (lo, hi) at which p does not vanish."""
    q = (lo + hi) / 2
    step = (hi - lo) / 4
    for _ in range(len(p) + 2):
        if _sign_at(p, q) != 0:
            return q
        q = q + step
        step /= 2
    raise ArithmeticError("could not find a non-root split point")


def _refine_sign_bracket(p, lo, hi, slo, width):
    """Shrink a sign-change bracket of a squarefree p below the target width."""
    while hi - lo > width:
        mid = _nonroot_split(p, lo, hi)
        if _sign_at(p, mid) == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _isolate_positive_bisect(chain, count, width):
    """Exact Sturm bisection isolation over (0, root bound)."""
    p = chain[0]
    out = []
    if count == 0:
        return out
    hi0 = _root_bound(p)
    stack = [(Fraction(0), hi0, _var_at_zero_plus(chain), _var_at(chain, hi0))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        c = vlo - vhi
        if c <= 0:
            continue
        if c == 1:
            slo = _sign_at(p, lo) if lo else next(_sgn(x) for x in p if x)
            out.append(_refine_sign_bracket(p, lo, hi, slo, width))
            continue
        mid = _nonroot_split(p, lo, hi)
        vmid = _var_at(chain, mid)
        stack.append((lo, mid, vlo, vmid))
        stack.append((mid, hi, vmid, vhi))
    out.sort()
    return out


def _positive_root_brackets(chain, count):
    """Certified isolating brackets with float seeds for the positive roots.

    The fast path takes companion-matrix candidates and certifies one
    disjoint sign-change bracket around each; since the bracket count then
    equals the exact Sturm count, every bracket isolates exactly one root
    and every root is caught.  Any failure falls back to pure Sturm
    bisection.  Requires a squarefree chain head.  Returns (lo, hi, seed)
    triples.
    """
    if count == 0:
        return []
    p = chain[0]
    cands = _float_root_candidates(p)
    if len(cands) == count:
        out = []
        prev_hi = Fraction(0)
        for i, r in enumerate(cands):
            gap_lo = (r - cands[i - 1]) / 2 if i else r
            gap_hi = (cands[i + 1] - r) / 2 if i + 1 < len(cands) else max(r, 1.0)
            h = max(min(gap_lo, gap_hi) * 0.5, 4e-16 * r)
            lo, hi = Fraction(max(r - h, r * 0.5)), Fraction(r + h)
            if lo <= prev_hi:
                break
            slo, shi = _sign_at(p, lo), _sign_at(p, hi)
            if slo == 0 or slo * shi >= 0:
                break
            prev_hi = hi
            out.append((lo, hi, r))
        if len(out) == count:
            return out
    brackets = _isolate_positive_bisect(chain, count, Fraction(1, 10**6))
    return [(lo, hi, float((lo + hi) / 2)) for lo, hi in brackets]


def _gcd_int(a, b):
    """gcd of two primitive integer polynomials, primitive with positive lead."""
    a, b = list(a), list(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem_signed(a, b)
        a, b = b, _prim(r)
    if a and a[-1] < 0:
        a = [-c for c in a]
    return a


def _divexact_int(a, b):
    """Exact quotient a / b over the rationals, must be an integer polynomial."""
    fa = [Fraction(int(c)) for c in a]
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = Fraction(int(b[-1]))
    for i in range(len(q) - 1, -1, -1):
        c = fa[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                fa[i + j] -= c * int(bj)
    if any(fa):
        raise ArithmeticError("division was not exact")
    if any(f.denominator != 1 for f in q):
        # can only happen for non-primitive operands; normalize through content
        den = math.lcm(*[f.denominator for f in q])
        return _prim([mpz(f.numerator * (den // f.denominator)) for f in q])
    return [mpz(f.numerator) for f in q]


def _squarefree_int(p):
    g = _gcd_int(p, _prim(_deriv(p)))
    if len(g) == 1:
        out = list(p)
    else:
        out = _divexact_int(p, g)
    out = _prim(out)
    if out[-1] < 0:
        out = [-c for c in out]
    return out


def _trim(p):
    while p and not p[-1]:
        p.pop()
    return p


def _yun_factors(p):
    """Squarefree decomposition p ~ prod f_i^i; returns [(f_i, i)] with deg f_i > 0.

    Intermediate cofactors keep their integer contents (only the gcds are
    normalized to primitive); stripping them would break the y - w'
    bookkeeping that separates multiplicities.
    """
    g = _gcd_int(p, _prim(_deriv(p)))
    if len(g) == 1:
        return [(_prim(p), 1)]
    w = _divexact_int(p, g)
    y = _divexact_int(_deriv(p), g)
    z = _trim([a - b for a, b in _pad(y, _deriv(w))])
    out = []
    i = 1
    while len(w) > 1:
        gi = _gcd_int(w, z) if z else _prim(w)
        if len(gi) > 1:
            out.append((gi, i))
        w = _divexact_int(w, gi)
        y = _divexact_int(z, gi) if z else []
        z = _trim([a - b for a, b in _pad(y, _deriv(w))])
        i += 1
    return out


def _pad(a, b):
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else mpz(0), b[i] if i < len(b) else mpz(0))
        for i in range(n)
    ]


# ---------------------------------------------------------------------------
# public univariate API
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SturmChain:
    """Signed remainder sequence p0, p1 = p0', -rem(p0, p1), ... with each
    element normalized to a primitive integer polynomial (a positive multiple
    of the mathematical chain element, which leaves all sign variations
    unchanged)."""

    polys: tuple

    def __len__(self):
        return len(self.polys)


@dataclass(frozen=True)
class RootBox:
    """Interval (lo, hi) isolating exactly one real root."""

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("root box requires lo < hi")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")

    @property
    def midpoint(self):
        return float((self.lo + self.hi) / 2)


def _unipoly_ints(p):
    if not isinstance(p, UniPoly):
        p = UniPoly(p)
    if p.is_zero:
        raise ValueError("zero polynomial rejected")
    return _lift_int(p.coeffs)


def sturm_chain(p):
    """Sturm chain of ``p`` with squarefree head, as exact polynomials."""
    ip = _unipoly_ints(p)
    ip = _squarefree_int(ip)
    chain = _sturm_chain_int(ip)
    return SturmChain(tuple(UniPoly([int(c) for c in q]) for q in chain))


def squarefree(p):
    """Squarefree part ``p / gcd(p, p')``, primitive with positive lead.

    Preserves the root set and drops multiplicities; accepts exact or float
    coefficients (floats are lifted to rationals exactly).
    """
    ip = _unipoly_ints(p)
    return UniPoly([int(c) for c in _squarefree_int(ip)])


def count_positive_roots(p):
    """Exact number of distinct real roots of ``p`` in (0, +inf).

    Sturm sign-variation count V(0+) - V(+inf); a root at exactly 0 is
    excluded by stripping the ``t^k`` factor first.
    """
    ip = _unipoly_ints(p)
    ip, _ = _strip_zero_root(ip)
    if len(ip) <= 1:
        return 0
    chain = _sturm_chain_int(ip)
    return _var_at_zero_plus(chain) - _var_at_inf(chain)


def isolate_positive_roots(p, width=Fraction(1, 10**6)):
    """Disjoint isolating intervals for every distinct positive root of ``p``.

    Isolation runs on the squarefree part by Sturm bisection; each interval
    is then shrunk below ``width``.  Multiplicities are read off a Yun
    squarefree decomposition.
    """
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be > 0")
    ip = _unipoly_ints(p)
    ip, _ = _strip_zero_root(ip)
    if len(ip) <= 1:
        return []
    factors = _yun_factors(ip)
    sf = _squarefree_int(ip)
    chain = _sturm_chain_int(sf)
    count = _var_at_zero_plus(chain) - _var_at_inf(chain)
    intervals = _isolate_positive_bisect(chain, count, width)
    boxes = []
    for lo, hi in intervals:
        mult = 1
        if len(factors) > 1 or factors[0][1] != 1:
            for f, m in factors:
                if len(f) > 1 and _sign_at(f, lo) * _sign_at(f, hi) < 0:
                    mult = m
                    break
        boxes.append(RootBox(lo=lo, hi=hi, multiplicity=mult))
    return boxes


# ---------------------------------------------------------------------------
# bivariate polynomials and resultants
# ---------------------------------------------------------------------------

class BiPoly:
    """Sparse bivariate polynomial with exact rational coefficients.

    Terms are stored as ``{(i, j): Fraction}`` for the monomial
    ``t1^i t2^j``.  Float inputs are lifted to rationals bit-for-bit.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = {}
        for (i, j), c in dict(terms).items():
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c:
                self.terms[(int(i), int(j))] = c

    @property
    def is_zero(self):
        return not self.terms

    def degree(self, axis):
        if not self.terms:
            return -math.inf
        return max(k[axis] for k in self.terms)

    @property
    def total_degree(self):
        if not self.terms:
            return -math.inf
        return max(i + j for i, j in self.terms)

    def __call__(self, x, y):
        if isinstance(x, (float, np.floating)) or isinstance(y, (float, np.floating)):
            x, y = float(x), float(y)
            return sum(float(c) * x**i * y**j for (i, j), c in self.terms.items())
        return sum(c * x**i * y**j for (i, j), c in self.terms.items())

    def partial(self, axis):
        out = {}
        for (i, j), c in self.terms.items():
            k = (i, j)[axis]
            if k:
                key = (i - 1, j) if axis == 0 else (i, j - 1)
                out[key] = out.get(key, 0) + k * c
        return BiPoly(out)

    def swap_axes(self):
        return BiPoly({(j, i): c for (i, j), c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return BiPoly({k: c * other for k, c in self.terms.items()})
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return BiPoly(out)

    __rmul__ = __mul__

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BiPoly(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) - c
        return BiPoly(out)

    def __repr__(self):
        return f"BiPoly({self.terms!r})"

    def max_abs_coeff(self):
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)


def _bipoly_int(p):
    """Clear denominators to mpz term dict (positive scaling only)."""
    den = mpz(1)
    for c in p.terms.values():
        den = gmpy2.lcm(den, c.denominator)
    return {k: mpz(c.numerator) * (den // c.denominator) for k, c in p.terms.items()}, den


def _t2_coeff_lists(pi, d2):
    """Coefficient of t2^j as an mpz list in t1, for j = 0..d2."""
    out = [[] for _ in range(d2 + 1)]
    d1 = max((i for (i, j) in pi), default=0)
    for j in range(d2 + 1):
        row = [mpz(0)] * (d1 + 1)
        for (i, jj), c in pi.items():
            if jj == j:
                row[i] = c
        while row and not row[-1]:
            row.pop()
        out[j] = row
    return out


def _poly_mul_int(a, b):
    if not a or not b:
        return []
    out = [mpz(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_sub_int(a, b):
    out = [x - y for x, y in _pad(a, b)]
    while out and not out[-1]:
        out.pop()
    return out


def _poly_divexact_list(a, b):
    """Exact division in Z[x], guaranteed by Bareiss theory."""
    if not a:
        return []
    q = [mpz(0)] * (len(a) - len(b) + 1)
    r = list(a)
    for i in range(len(q) - 1, -1, -1):
        c = r[i + len(b) - 1]
        qc = c // b[-1]
        q[i] = qc
        if qc:
            for j, bj in enumerate(b):
                r[i + j] -= qc * bj
    return q


def _sylvester_entries(p1i, p2i):
    d1 = max((j for (i, j) in p1i), default=0)
    d2 = max((j for (i, j) in p2i), default=0)
    if d1 == 0 and d2 == 0:
        raise ValueError("resultant undefined: both inputs constant in the eliminated variable")
    arows = _t2_coeff_lists(p1i, d1)
    brows = _t2_coeff_lists(p2i, d2)
    n = d1 + d2
    M = [[[] for _ in range(n)] for _ in range(n)]
    for r in range(d2):
        for j in range(d1 + 1):
            M[r][r + j] = list(arows[d1 - j])
    for r in range(d1):
        for j in range(d2 + 1):
            M[d2 + r][r + j] = list(brows[d2 - j])
    return M, d1, d2


def _bareiss_poly_det(M):
    """Fraction-free determinant of a matrix of integer polynomials."""
    n = len(M)
    if n == 0:
        return [mpz(1)]
    sign = 1
    prev = [mpz(1)]
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return []
        piv = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = _poly_sub_int(
                    _poly_mul_int(M[i][j], piv), _poly_mul_int(M[i][k], M[k][j])
                )
                M[i][j] = _poly_divexact_list(num, prev)
            M[i][k] = []
        prev = piv
    det = M[n - 1][n - 1]
    return [sign * c for c in det] if sign < 0 else det


def _bareiss_int_det(M):
    """Fraction-free determinant of an mpz matrix (destructive)."""
    n = len(M)
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return mpz(0)
        piv = M[k][k]
        for i in range(k + 1, n):
            row, rk = M[i], M[i][k]
            for j in range(k + 1, n):
                row[j] = (row[j] * piv - rk * M[k][j]) // prev
            row[k] = mpz(0)
        prev = piv
    return sign * M[n - 1][n - 1]


def _resultant_interp(p1i, p2i, degbound):
    """Exact resultant by integer evaluation at degbound+1 points, then
    exact Newton interpolation."""
    d1 = max((j for (i, j) in p1i), default=0)
    d2 = max((j for (i, j) in p2i), default=0)
    if d1 == 0 and d2 == 0:
        raise ValueError("resultant undefined: both inputs constant in the eliminated variable")
    # group coefficients by t2 power once
    g1 = _t2_coeff_lists(p1i, d1)
    g2 = _t2_coeff_lists(p2i, d2)
    n = d1 + d2
    pts, vals = [], []
    v = 0
    while len(pts) < degbound + 1:
        tv = mpz(v)
        a = [_eval_plain(row, tv) for row in g1]
        b = [_eval_plain(row, tv) for row in g2]
        M = [[mpz(0)] * n for _ in range(n)]
        for r in range(d2):
            for j in range(d1 + 1):
                M[r][r + j] = a[d1 - j]
        for r in range(d1):
            for j in range(d2 + 1):
                M[d2 + r][r + j] = b[d2 - j]
        pts.append(tv)
        vals.append(_bareiss_int_det(M))
        v = -v if v > 0 else -v + 1
    # Newton divided differences over exact rationals
    coef = [gmpy2.mpq(x) for x in vals]
    npts = len(pts)
    for j in range(1, npts):
        for i in range(npts - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (pts[i] - pts[i - j])
    poly = [gmpy2.mpq(0)] * npts
    poly[0] = coef[npts - 1]
    deg = 0
    for k in range(npts - 2, -1, -1):
        for i in range(deg + 1, 0, -1):
            poly[i] = poly[i - 1] - pts[k] * poly[i]
        poly[0] = coef[k] - pts[k] * poly[0]
        deg += 1
    den = mpz(1)
    for q in poly:
        den = gmpy2.lcm(den, q.denominator)
    out = [mpz(q * den) for q in poly]
    assert den == 1
    while out and not out[-1]:
        out.pop()
    return out


def _eval_plain(p, x):
    acc = mpz(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sylvester_resultant(p1, p2, eliminate=1, method="auto"):
    """Resultant of two bivariate polynomials w.r.t. the eliminated axis.

    Returns the determinant of the Sylvester matrix as a univariate
    polynomial in the kept variable; it vanishes exactly at values admitting
    a common root in the eliminated variable (or at degree-drop
    degeneracies, which callers handle downstream).

    ``method`` selects the evaluation route: ``"bareiss"`` runs fraction-free
    elimination directly over the polynomial ring; ``"interp"`` evaluates the
    integer Sylvester determinant at enough points and interpolates exactly
    (same result, faster for larger matrices); ``"auto"`` picks by size.
    """
    if not isinstance(p1, BiPoly):
        p1 = BiPoly(p1)
    if not isinstance(p2, BiPoly):
        p2 = BiPoly(p2)
    if p1.is_zero or p2.is_zero:
        raise ValueError("zero polynomial rejected")
    if eliminate not in (0, 1):
        raise ValueError("eliminate must be axis 0 or 1")
    if eliminate == 0:
        p1, p2 = p1.swap_axes(), p2.swap_axes()
    p1i, den1 = _bipoly_int(p1)
    p2i, den2 = _bipoly_int(p2)
    d1 = max((j for (i, j) in p1i), default=0)
    d2 = max((j for (i, j) in p2i), default=0)
    if d1 == 0 and d2 == 0:
        raise ValueError("resultant undefined: both inputs constant in the eliminated variable")
    if method == "auto":
        method = "interp" if d1 + d2 >= 5 else "bareiss"
    if method == "interp":
        degbound = int(p1.total_degree) * int(p2.total_degree)
        ires = _resultant_interp(p1i, p2i, max(degbound, 0))
    elif method == "bareiss":
        M, _, _ = _sylvester_entries(p1i, p2i)
        ires = _bareiss_poly_det(M)
    else:
        raise ValueError(f"unknown method {method!r}")
    scale = Fraction(1, int(den1) ** d2 * int(den2) ** d1)
    return UniPoly([int(c) * scale for c in ires])


# ---------------------------------------------------------------------------
# bivariate system root counting
# ---------------------------------------------------------------------------

def _float_coeff_matrix(p):
    d0 = int(p.degree(0)) if not p.is_zero else 0
    d1 = int(p.degree(1)) if not p.is_zero else 0
    C = np.zeros((d0 + 1, d1 + 1))
    scale = p.max_abs_coeff() or 1.0
    for (i, j), c in p.terms.items():
        C[i, j] = float(c) / scale
    return C


def _eval_grid(C, t1, t2):
    v1 = t1 ** np.arange(C.shape[0])
    v2 = t2 ** np.arange(C.shape[1])
    return float(v1 @ C @ v2)


def _newton_refine(C1, C2, t1, t2, tol, iters=25):
    k1 = np.arange(max(C1.shape[0], C2.shape[0]))
    k2 = np.arange(max(C1.shape[1], C2.shape[1]))
    for _ in range(iters):
        v1 = t1**k1
        v2 = t2**k2
        w1 = k1[1:] * v1[:-1]  # d/dt1 power vector
        w2 = k2[1:] * v2[:-1]
        a1, a2 = v1[: C1.shape[0]], v2[: C1.shape[1]]
        b1, b2 = v1[: C2.shape[0]], v2[: C2.shape[1]]
        f1 = float(a1 @ C1 @ a2)
        f2 = float(b1 @ C2 @ b2)
        j11 = float(w1[: C1.shape[0] - 1] @ C1[1:] @ a2) if C1.shape[0] > 1 else 0.0
        j12 = float(a1 @ C1[:, 1:] @ w2[: C1.shape[1] - 1]) if C1.shape[1] > 1 else 0.0
        j21 = float(w1[: C2.shape[0] - 1] @ C2[1:] @ b2) if C2.shape[0] > 1 else 0.0
        j22 = float(b1 @ C2[:, 1:] @ w2[: C2.shape[1] - 1]) if C2.shape[1] > 1 else 0.0
        det = j11 * j22 - j12 * j21
        if det == 0.0 or not math.isfinite(det):
            break
        s1 = (f1 * j22 - f2 * j12) / det
        s2 = (f2 * j11 - f1 * j21) / det
        t1 -= s1
        t2 -= s2
        if abs(s1) <= tol * (1.0 + abs(t1)) and abs(s2) <= tol * (1.0 + abs(t2)):
            break
    return t1, t2


def _abs_magnitude(p, t1, t2):
    return sum(abs(float(c)) * abs(t1) ** i * abs(t2) ** j for (i, j), c in p.terms.items())


def positive_system_roots(p1, p2, refine_tol=1e-10, dedup_tol=1e-7):
    """Distinct solutions of ``p1 = p2 = 0`` with both coordinates positive.

    Pipeline: Sylvester resultant eliminating the second variable, exact
    isolation of its positive roots, numeric back-substitution for the
    second coordinate, joint Newton refinement, residual gate, dedup.
    Returns refined (t1, t2) pairs.

    Solutions on the coordinate axes do not count; a refined coordinate
    within ~100x the refinement tolerance of zero is indistinguishable from
    an axis solution and is rejected, so roots planted closer to an axis
    than that are outside this routine's resolution.
    """
    if not isinstance(p1, BiPoly):
        p1 = BiPoly(p1)
    if not isinstance(p2, BiPoly):
        p2 = BiPoly(p2)
    if p1.is_zero or p2.is_zero:
        raise DegenerateSystemError("zero polynomial in system")
    for p in (p1, p2):
        if p.total_degree > MAX_SYSTEM_DEGREE:
            raise CapacityError(
                f"total degree {p.total_degree} exceeds cap {MAX_SYSTEM_DEGREE}"
            )
    # back-substitution solves p_solve(t1*, .) = 0, so it must involve t2
    if p1.degree(1) <= 0 and p2.degree(1) <= 0:
        raise DegenerateSystemError("system does not involve the second variable")
    p_solve = p1 if p1.degree(1) > 0 else p2
    p_gate = p2 if p_solve is p1 else p1

    res = sylvester_resultant(p1, p2, eliminate=1, method="auto")
    ires = _lift_int(res.coeffs)
    if not ires:
        raise DegenerateSystemError("identically zero resultant (non-generic system)")
    ires, _ = _strip_zero_root(ires)
    if len(ires) <= 1:
        return []
    chain = _sturm_chain_int(ires)
    if len(chain[-1]) > 1:
        # non-squarefree resultant (two solutions sharing a coordinate, or a
        # multiple root): redo on the squarefree part
        chain = _sturm_chain_int(_squarefree_int(ires))
    count = _var_at_zero_plus(chain) - _var_at_inf(chain)
    if count == 0:
        return []
    brackets = _positive_root_brackets(chain, count)

    C1 = _float_coeff_matrix(p_solve)
    C2 = _float_coeff_matrix(p_gate)
    gate_scale = p_gate.max_abs_coeff() or 1.0
    axis_tol = 100.0 * refine_tol
    found = []
    for lo, hi, t1c in brackets:
        lo_f = float(lo) * (1.0 - 1e-9)
        hi_f = float(hi) * (1.0 + 1e-9)
        # roots of p_solve(t1c, .)
        poly_t2 = np.array(
            [_eval_plain_float(C1[:, j], t1c) for j in range(C1.shape[1])][::-1]
        )
        if not np.any(poly_t2 != 0.0):
            continue
        for r in np.roots(poly_t2):
            if abs(r.imag) > 1e-6 * (1.0 + abs(r.real)) or r.real <= 0.0:
                continue
            t1r, t2r = _newton_refine(C1, C2, t1c, float(r.real), refine_tol)
            if not (
                math.isfinite(t1r)
                and math.isfinite(t2r)
                and lo_f <= t1r <= hi_f
            ):
                # Newton slid off this resultant root's isolating bracket
                # (singular Jacobian, or a nearby boundary solution); fall
                # back to the certified seed pair and let the residual gate
                # decide whether it is a genuine root
                t1r, t2r = t1c, float(r.real)
            if not (t1r > axis_tol and t2r > axis_tol):
                continue
            residual = abs(p_gate(t1r, t2r)) / gate_scale
            mag = _abs_magnitude(p_gate, t1r, t2r) / gate_scale
            if residual > 1e-8 * (1.0 + mag):
                continue
            found.append((t1r, t2r))
    # dedup in relative max-norm
    out = []
    for cand in sorted(found):
        dup = False
        for kept in out:
            scale = max(abs(cand[0]), abs(kept[0]), abs(cand[1]), abs(kept[1]), 1e-300)
            dist = max(abs(cand[0] - kept[0]), abs(cand[1] - kept[1])) / scale
            if dist <= dedup_tol:
                dup = True
                break
        if not dup:
            out.append(cand)
    return out


def _eval_plain_float(col, x):
    acc = 0.0
    for c in col[::-1]:
        acc = acc * x + c
    return acc


def count_positive_system_roots(p1, p2, refine_tol=1e-10, dedup_tol=1e-7):
    """Number of distinct positive-orthant solutions of the bivariate system."""
    return len(positive_system_roots(p1, p2, refine_tol, dedup_tol))


# ---------------------------------------------------------------------------
# factorization representation of the weight polynomial
# ---------------------------------------------------------------------------

def verify_m_factorization(d, t_samples):
    """Check the root-sum representation of the squared density against the
    factored form of the weight polynomial.

    Finds the ``d-1`` roots of ``M_d`` in the variable ``s = t^2``, asserts
    they are all real and negative (so ``M_d(t) = prod (t^2 + r_i)`` with
    ``r_i > 0``), then returns the maximum relative residual of
    ``(2 pi f_d(t))^2 = sum_i 4 r_i / (t^2 + r_i)^2`` over the samples.
    Raises :class:`VerificationFailure` if any root is not real-negative.
    """
    from .density import f2d_via_G

    if d < 2:
        raise ValueError("d must be >= 2")
    ms = m_poly(d)
    # roots of M_d(s) are negative iff roots of M_d(-s) are positive
    neg = UniPoly([(-1) ** k * c for k, c in enumerate(ms.coeffs)])
    n_pos_mirror = count_positive_roots(neg)
    n_pos_direct = count_positive_roots(ms)
    if n_pos_mirror != d - 1 or n_pos_direct != 0:
        raise VerificationFailure(
            f"M_{d} has {n_pos_mirror} real-negative roots, expected {d - 1} "
            f"(and {n_pos_direct} positive roots, expected 0)"
        )
    boxes = isolate_positive_roots(neg, width=Fraction(1, 10**9))
    coeffs = np.array([float(c) for c in neg.coeffs])
    dcoeffs = coeffs[1:] * np.arange(1, len(coeffs))
    rs = []
    for box in boxes:
        r = box.midpoint
        for _ in range(8):
            num = _eval_plain_float(coeffs, r)
            den = _eval_plain_float(dcoeffs, r)
            if den == 0.0:
                break
            r -= num / den
        rs.append(r)
    rs = np.array(rs)
    worst = 0.0
    for t in t_samples:
        lhs = float(np.sum(4.0 * rs / (t * t + rs) ** 2))
        rhs = (2.0 * math.pi * f2d_via_G(d, float(t))) ** 2
        worst = max(worst, abs(lhs - rhs) / rhs)
    return worst


# ---------------------------------------------------------------------------
# stability of a two-strategy equilibrium
# ---------------------------------------------------------------------------

def classify_stability_2(beta, root_box, d, zero_tol=1e-12):
    """Stability of an isolated equilibrium of a d-player two-strategy game.

    ``beta`` are the payoff-difference coefficients; the fitness difference
    in frequency coordinates is the Bernstein-form polynomial
    ``B(y) = sum_k beta_k C(d-1,k) y^k (1-y)^{d-1-k}``.  The equilibrium at
    ``y* = t*/(1+t*)`` is stable when ``B'(y*) < 0`` (an advantage that
    decreases in its own frequency restores the mixture).  A derivative
    within ``zero_tol`` of zero reports INDETERMINATE.
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (d,):
        raise ValueError(f"beta must have length d = {d}")
    # polish the root of sum beta_k C(d-1,k) t^k inside the box
    coeffs = beta * np.array([math.comb(d - 1, k) for k in range(d)])
    dcoeffs = coeffs[1:] * np.arange(1, d)
    t = root_box.midpoint
    lo, hi = float(root_box.lo), float(root_box.hi)
    for _ in range(6):
        num = _eval_plain_float(coeffs, t)
        den = _eval_plain_float(dcoeffs, t)
        if den == 0.0:
            break
        step = num / den
        tn = t - step
        if not lo <= tn <= hi:
            break
        t = tn
    y = t / (1.0 + t)
    # Bernstein derivative: B' = (d-1) sum_k (beta_{k+1}-beta_k) b_{k,d-2}(y)
    diff = beta[1:] - beta[:-1]
    db = 0.0
    for k in range(d - 1):
        db += diff[k] * math.comb(d - 2, k) * y**k * (1.0 - y) ** (d - 2 - k)
    db *= d - 1
    if abs(db) <= zero_tol:
        return Stability.INDETERMINATE
    return Stability.STABLE if db < 0.0 else Stability.UNSTABLE

"""Certified arithmetic with algebraic numbers given by integer polynomials.

Polynomials are lists of coefficients in descending degree order.  Real roots
are carried as (minimal polynomial, isolating rational interval); complex
roots as isolating rational boxes.  Everything refines on demand and all
comparisons are backed either by interval separation or by an exact
polynomial identity, never by floating point.

Degree <= 2 is handled with pure rational arithmetic; higher degrees defer
isolation and factorization to sympy (loaded lazily).
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Sequence

IntPoly = list  # int coefficients, descending degree


# ---------------------------------------------------------------------------
# basic integer/rational polynomial helpers


def poly_degree(p: Sequence) -> int:
    return len(p) - 1


def poly_eval(p: Sequence, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def poly_derivative(p: Sequence) -> list:
    n = poly_degree(p)
    return [c * (n - i) for i, c in enumerate(p[:-1])] or [0]


def poly_normalize(p: Sequence) -> list[int]:
    """Primitive integer polynomial with positive leading coefficient."""
    q = [Fraction(c) for c in p]
    while q and q[0] == 0:
        q.pop(0)
    if not q:
        return [0]
    den = math.lcm(*(c.denominator for c in q))
    ints = [int(c * den) for c in q]
    g = math.gcd(*(abs(c) for c in ints))
    ints = [c // g for c in ints]
    if ints[0] < 0:
        ints = [-c for c in ints]
    return ints


def poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    db, lb = poly_degree(b), b[0]
    while poly_degree(a) >= db and any(c != 0 for c in a):
        if a[0] == 0:
            a.pop(0)
            continue
        f = a[0] / lb
        for i in range(db + 1):
            a[i] -= f * b[i]
        a.pop(0)
    while len(a) > 1 and a[0] == 0:
        a.pop(0)
    return a or [Fraction(0)]


def sturm_chain(p: Sequence) -> list[list[Fraction]]:
    p0 = [Fraction(c) for c in p]
    p1 = [Fraction(c) for c in poly_derivative(p)]
    chain = [p0, p1]
    while poly_degree(chain[-1]) > 0 or chain[-1][0] != 0:
        r = poly_rem(chain[-2], chain[-1])
        if len(r) == 1 and r[0] == 0:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x) -> int:
    signs = []
    for q in chain:
        v = poly_eval(q, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Sequence, lo: Fraction, hi: Fraction, chain=None) -> int:
    """Number of distinct real roots of p in (lo, hi]; p must be squarefree."""
    if lo >= hi:
        return 0
    chain = chain or sturm_chain(p)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def count_roots_closed(p: Sequence, lo: Fraction, hi: Fraction, chain=None) -> int:
    """Distinct real roots of squarefree p in [lo, hi] (endpoints included)."""
    if lo > hi:
        return 0
    at_lo = 1 if poly_eval([Fraction(c) for c in p], lo) == 0 else 0
    if lo == hi:
        return at_lo
    return count_real_roots(p, lo, hi, chain) + at_lo


def root_bound(p: Sequence) -> Fraction:
    """Cauchy bound: all roots have |x| <= 1 + max|c_i/c_0|."""
    lead = abs(p[0])
    m = max((abs(Fraction(c)) for c in p[1:]), default=Fraction(0))
    return 1 + m / lead


# ---------------------------------------------------------------------------
# rational square roots with certified bounds


def sqrt_bounds(x: Fraction, scale: int = 2**32) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(x) <= hi with hi - lo <= 2/scale roughly."""
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return Fraction(0), Fraction(0)
    num = x.numerator * scale * scale
    den = x.denominator
    r = math.isqrt(num // den)
    lo = Fraction(r, scale)
    while lo * lo > x:
        r -= 1
        lo = Fraction(r, scale)
    hi = Fraction(r + 1, scale)
    while hi * hi < x:
        r += 1
        hi = Fraction(r + 1, scale)
    return lo, hi


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


# ---------------------------------------------------------------------------
# factorization into irreducibles over Q


def factor_int_poly(p: Sequence) -> list[tuple[list[int], int]]:
    """Irreducible integer factors with multiplicities (content dropped).

    Degree <= 2 is decided directly (rational-root formula / discriminant);
    higher degrees go through sympy.  Results are cached per polynomial.
    """
    return [(list(f), k) for f, k in _factor_cached(tuple(poly_normalize(p)))]


@functools.lru_cache(maxsize=4096)
def _factor_cached(p: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    deg = poly_degree(p)
    factors: dict[tuple[int, ...], int] = {}

    def add(f, k: int = 1):
        f = tuple(poly_normalize(list(f)))
        factors[f] = factors.get(f, 0) + k

    if deg == 1:
        add(p)
    elif deg == 2:
        a, b, c = p
        disc = b * b - 4 * a * c
        if disc >= 0 and is_perfect_square(disc):
            r = math.isqrt(disc)
            for num in (-b - r, -b + r):
                root = Fraction(num, 2 * a)
                add((root.denominator, -root.numerator))
        else:
            add(p)
    elif deg > 2:
        import sympy

        x = sympy.Symbol("x")
        _, fl = sympy.factor_list(sympy.Poly([sympy.Integer(c) for c in p], x))
        for f, k in fl:
            add([int(c) for c in sympy.Poly(f, x).all_coeffs()], k)
    return tuple(sorted(factors.items(), key=lambda kv: (poly_degree(kv[0]), kv[0])))


def poly_rem_quotient(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Exact quotient a / b (remainder must vanish)."""
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    out = []
    db, lb = poly_degree(b), b[0]
    while poly_degree(a) >= db:
        f = a[0] / lb
        out.append(f)
        for i in range(db + 1):
            a[i] -= f * b[i]
        a.pop(0)
    assert all(c == 0 for c in a), "non-exact polynomial division"
    return out


# ---------------------------------------------------------------------------
# root handles: (minpoly, isolating interval/box) with refinement


class RealRoot:
    """A real algebraic number: irreducible minpoly + isolating interval.

    For degree 1 the value is exact.  Intervals never contain other roots of
    the minpoly and exclude rationals of interest by refinement (an
    irreducible polynomial of degree >= 2 has no rational roots, so interval
    endpoints are never roots).
    """

    def __init__(self, minpoly: list[int], lo: Fraction, hi: Fraction, _sympy_root=None):
        self.minpoly = minpoly
        self.lo = lo
        self.hi = hi
        self._root = _sympy_root
        self._iv = _sympy_root._get_interval() if _sympy_root is not None else None
        self._chain = None

    @property
    def is_rational(self) -> bool:
        return poly_degree(self.minpoly) == 1

    @property
    def value(self) -> Fraction | None:
        if self.is_rational:
            return Fraction(-self.minpoly[1], self.minpoly[0])
        return None

    def chain(self):
        if self._chain is None:
            self._chain = sturm_chain(self.minpoly)
        return self._chain

    def refine(self) -> None:
        if self.is_rational:
            return
        if self._root is not None:
            self._iv = self._iv.refine()
            self.lo, self.hi = _frac(self._iv.a), _frac(self._iv.b)
            return
        mid = (self.lo + self.hi) / 2
        if count_real_roots(self.minpoly, self.lo, mid, self.chain()):
            self.hi = mid
        else:
            self.lo = mid

    def refine_below(self, width: Fraction) -> None:
        while self.hi - self.lo > width:
            self.refine()

    def sign(self) -> int:
        if self.is_rational:
            v = self.value
            return (v > 0) - (v < 0)
        while self.lo < 0 < self.hi:
            self.refine()
        return 1 if self.lo >= 0 else -1

    def cmp_rational(self, q: Fraction) -> int:
        """Certified comparison against a rational."""
        if self.is_rational:
            v = self.value
            return (v > q) - (v < q)
        if poly_eval([Fraction(c) for c in self.minpoly], q) == 0:
            raise AssertionError("rational root of irreducible polynomial")
        while self.lo < q < self.hi:
            self.refine()
        return 1 if self.lo >= q else -1


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def isolate_real_roots(p: list[int]) -> list[RealRoot]:
    """Isolating intervals for all real roots of an irreducible polynomial."""
    deg = poly_degree(p)
    if deg == 1:
        v = Fraction(-p[1], p[0])
        return [RealRoot(p, v, v)]
    if deg == 2:
        a, b, c = p
        disc = b * b - 4 * a * c
        if disc <= 0:
            return []
        lo_s, hi_s = sqrt_bounds(Fraction(disc))
        r1 = RealRoot(p, (-b - hi_s) / (2 * a), (-b - lo_s) / (2 * a))
        r2 = RealRoot(p, (-b + lo_s) / (2 * a), (-b + hi_s) / (2 * a))
        roots = sorted([r1, r2], key=lambda r: r.lo)
        for r in roots:
            _ensure_isolating(roots, r)
        return roots
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Integer(c) for c in p], x)
    out = []
    for root in poly.all_roots():
        if root.is_real:
            if root.is_rational:
                v = _frac(sympy.Rational(root))
                out.append(RealRoot(p, v, v))
            else:
                iv = root._get_interval()
                out.append(RealRoot(p, _frac(iv.a), _frac(iv.b), _sympy_root=root))
    return out


def _ensure_isolating(roots: list[RealRoot], r: RealRoot) -> None:
    chain = r.chain()
    while count_real_roots(r.minpoly, r.lo, r.hi, chain) != 1:
        for q in roots:
            q.refine()


class ComplexRoot:
    """A non-real algebraic number: irreducible minpoly + isolating box.

    Backed either by a sympy CRootOf handle or, for quadratics, by exact
    rational data (-b + sign * i * sqrt(-disc)) / (2a) with on-demand
    tightening of the square-root bounds.
    """

    def __init__(self, minpoly: list[int], sympy_root=None, quad_sign: int = 0, _scale: int = 2**16):
        self.minpoly = minpoly
        self._root = sympy_root
        self._quad_sign = quad_sign
        self._scale = _scale
        if sympy_root is not None:
            self._iv = sympy_root._get_interval()
            self._load(self._iv)
        else:
            assert quad_sign in (-1, 1) and poly_degree(minpoly) == 2
            self._quad_load()

    def _load(self, iv):
        self.ax, self.bx = _frac(iv.ax), _frac(iv.bx)
        self.ay, self.by = _frac(iv.ay), _frac(iv.by)

    def _quad_load(self):
        a, b, c = (Fraction(x) for x in self.minpoly)
        disc = b * b - 4 * a * c
        lo_s, hi_s = sqrt_bounds(-disc, self._scale)
        self.ax = self.bx = -b / (2 * a)
        y_lo, y_hi = lo_s / (2 * a), hi_s / (2 * a)
        if self._quad_sign > 0:
            self.ay, self.by = y_lo, y_hi
        else:
            self.ay, self.by = -y_hi, -y_lo

    def refine(self) -> None:
        if self._root is not None:
            self._iv = self._iv.refine()
            self._load(self._iv)
        else:
            self._scale *= 4
            self._quad_load()

    def box(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.ax, self.bx, self.ay, self.by)


def isolate_complex_roots(p: list[int]) -> list[ComplexRoot]:
    """Isolating boxes for the non-real roots of an irreducible polynomial."""
    if poly_degree(p) < 2:
        return []
    if poly_degree(p) == 2:
        a, b, c = p
        if b * b - 4 * a * c >= 0:
            return []
        return [ComplexRoot(p, quad_sign=1), ComplexRoot(p, quad_sign=-1)]
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Integer(c) for c in p], x)
    return [ComplexRoot(p, sympy_root=r) for r in poly.all_roots() if not r.is_real]


# ---------------------------------------------------------------------------
# |root|^2 as an exact algebraic number


def abs_square_interval(root) -> tuple[Fraction, Fraction]:
    """Current certified bounds on |root|^2 from the interval/box."""
    if isinstance(root, RealRoot):
        if root.is_rational:
            v = root.value * root.value
            return v, v
        lo, hi = root.lo, root.hi
        return _sq_interval(lo, hi), _sq_interval_hi(lo, hi)
    lox = _sq_interval(root.ax, root.bx)
    hix = _sq_interval_hi(root.ax, root.bx)
    loy = _sq_interval(root.ay, root.by)
    hiy = _sq_interval_hi(root.ay, root.by)
    return lox + loy, hix + hiy


def _sq_interval(lo: Fraction, hi: Fraction) -> Fraction:
    if lo <= 0 <= hi:
        return Fraction(0)
    m = min(abs(lo), abs(hi))
    return m * m


def _sq_interval_hi(lo: Fraction, hi: Fraction) -> Fraction:
    m = max(abs(lo), abs(hi))
    return m * m


def _sympy_poly(p: Sequence, sym):
    import sympy

    return sympy.Poly([sympy.Integer(int(c)) for c in p], sym)


@functools.lru_cache(maxsize=512)
def _square_roots_poly_cached(p: tuple[int, ...]) -> tuple[int, ...]:
    import sympy

    x, t = sympy.symbols("x t")
    res = sympy.resultant(_sympy_poly(p, x).as_expr(), x * x - t, x)
    return tuple(poly_normalize([int(c) for c in sympy.Poly(res, t).all_coeffs()]))


def square_roots_poly(p: list[int]) -> list[int]:
    """Polynomial whose roots are the squares of the roots of p."""
    return list(_square_roots_poly_cached(tuple(poly_normalize(p))))


@functools.lru_cache(maxsize=512)
def _pair_products_poly_cached(p: tuple[int, ...]) -> tuple[int, ...]:
    import sympy

    x, t = sympy.symbols("x t")
    g = poly_degree(p)
    px = _sympy_poly(p, x).as_expr()
    # x^g * p(t/x): roots in x of the pair (p(x), .) give products x*y = t
    qx = sympy.expand(x**g * px.subs(x, t / x))
    res = sympy.resultant(px, qx, x)
    poly_t = sympy.Poly(sympy.expand(res), t)
    # products with i == j (squares) are kept: interval selection isolates
    return tuple(poly_normalize([int(c) for c in poly_t.all_coeffs()]))


def pair_products_poly(p: list[int]) -> list[int]:
    """Polynomial whose roots include all pairwise products of roots of p
    (i != j); |z|^2 = z * conj(z) is among them for non-real z."""
    return list(_pair_products_poly_cached(tuple(poly_normalize(p))))


def abs_square_minpoly(root) -> tuple[list[int], tuple[Fraction, Fraction]]:
    """Minimal polynomial of |root|^2 plus a certified isolating interval.

    Refines `root` until the |root|^2 interval isolates a single root of a
    single irreducible factor of the candidate polynomial.
    """
    if isinstance(root, RealRoot) and root.is_rational:
        v = root.value * root.value
        return poly_normalize([v.denominator, -v.numerator]), (v, v)
    if isinstance(root, RealRoot):
        cand = square_roots_poly(root.minpoly)
    else:
        cand = pair_products_poly(root.minpoly)
    factors = [f for f, _ in factor_int_poly(cand)]
    chains = {tuple(f): sturm_chain(f) for f in factors}
    for _ in range(300):
        lo, hi = abs_square_interval(root)
        hits = []
        for f in factors:
            if poly_degree(f) == 1:
                v = Fraction(-f[1], f[0])
                cnt = 1 if lo <= v <= hi else 0
            else:
                cnt = count_roots_closed(f, lo, hi, chains[tuple(f)])
            if cnt:
                hits.append((f, cnt))
        if len(hits) == 1 and hits[0][1] == 1:
            return hits[0][0], (lo, hi)
        root.refine()
    raise RuntimeError("failed to isolate |root|^2 against candidate polynomial")


def _polymod_mul(a, b, mp):
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                prod[i + j] += ca * cb
    return poly_rem(prod, mp)


def power_element(minpoly: Sequence, d: int) -> list[Fraction]:
    """x^d mod minpoly (descending coefficients), by square and multiply."""
    mp = [Fraction(c) for c in minpoly]
    result = [Fraction(1)]
    base = poly_rem([Fraction(1), Fraction(0)], mp)
    e = d
    while e:
        if e & 1:
            result = _polymod_mul(result, base, mp)
        e >>= 1
        if e:
            base = _polymod_mul(base, base, mp)
    return result


def element_power_rational(minpoly: list[int], d: int) -> Fraction | None:
    """If x^d mod minpoly is a constant, return it (the root's d-th power is
    then that rational); otherwise None."""
    deg = poly_degree(minpoly)
    if deg == 1:
        return Fraction(-minpoly[1], minpoly[0]) ** d
    result = power_element(minpoly, d)
    if poly_degree(result) == 0:
        return result[0]
    return None


def _charpoly_fractions(M: list[list[Fraction]]) -> list[Fraction]:
    """Characteristic polynomial of a rational matrix (Faddeev-LeVerrier)."""
    n = len(M)
    coeffs = [Fraction(1)]
    N = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        # N <- M N ; c_k = -tr(M N)/k ; N <- N + c_k I
        MN = [[sum(M[i][t] * N[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(MN[i][i] for i in range(n)) / k
        coeffs.append(c)
        N = [[MN[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


def element_power_minpoly(minpoly: list[int], d: int) -> list[int]:
    """Minimal polynomial over Q of x^d viewed in Q[x]/(minpoly).

    The characteristic polynomial of multiplication by x^d on the field is a
    power of the element's minimal polynomial; factoring recovers it.
    """
    deg = poly_degree(minpoly)
    if deg == 1:
        v = Fraction(-minpoly[1], minpoly[0]) ** d
        return poly_normalize([v.denominator, -v.numerator])
    u = power_element(minpoly, d)
    mp = [Fraction(c) for c in minpoly]
    # columns: u * x^j mod minpoly, ascending basis 1, x, ..., x^(deg-1)
    cols = []
    elt = u
    for j in range(deg):
        asc = [Fraction(0)] * deg
        for i, c in enumerate(elt):  # elt descending
            asc[len(elt) - 1 - i] = c
        cols.append(asc)
        elt = _polymod_mul(elt, [Fraction(1), Fraction(0)], mp)
    M = [[cols[j][i] for j in range(deg)] for i in range(deg)]
    cp = _charpoly_fractions(M)
    factors = factor_int_poly(poly_normalize(cp))
    assert len(factors) == 1, "multiplication charpoly must be a prime power over a field"
    return factors[0][0]

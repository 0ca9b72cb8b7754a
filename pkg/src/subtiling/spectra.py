"""Exact spectral analysis of substitution matrices.

Produces, entirely in certified arithmetic: the characteristic polynomial,
the distinct eigenvalues sorted by descending absolute value (with certified
tie handling), Jordan block sizes, the two all-ones-orthogonality flags per
eigenvalue, the Perron data (dominant eigenvalue, positive right eigenvector,
volume left eigenvector, asymptotic point density), and the distinguished
index of the largest eigenvalue class whose generalized eigenspace is not
orthogonal to the all-ones vector.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

from . import qlinalg
from .algebraic import (
    ComplexRoot,
    RealRoot,
    abs_square_interval,
    abs_square_minpoly,
    count_roots_closed,
    factor_int_poly,
    isolate_complex_roots,
    isolate_real_roots,
    poly_degree,
    sqrt_bounds,
    sturm_chain,
)
from .numberfield import NumberField
from .ruleset import RuleSet, check_left_eigenvector, primitivity_check, substitution_matrix

__all__ = [
    "AnalysisError",
    "NonPrimitiveError",
    "PerronMismatchError",
    "CharPoly",
    "Eigenvalue",
    "SpectralReport",
    "char_poly",
    "eigen_decompose",
    "perron_data",
    "find_t",
    "analyze_matrix",
    "analyze_ruleset",
]

_REFINE_CAP = 400


class AnalysisError(Exception):
    code = "analysis-error"


class NonPrimitiveError(AnalysisError):
    code = "non-primitive"


class PerronMismatchError(AnalysisError):
    code = "perron-mismatch"


@dataclass(frozen=True)
class CharPoly:
    """det(xI - A): monic integer coefficients, descending degree."""

    coefficients: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def eval(self, x):
        return qlinalg.poly_eval(self.coefficients, x)


def char_poly(A) -> CharPoly:
    return CharPoly(tuple(qlinalg.berkowitz_charpoly(A)))


class Eigenvalue:
    """One distinct eigenvalue with certified location and Jordan data.

    `root` is a RealRoot or ComplexRoot handle refined on demand; refinement
    only narrows published bounds and never changes any exact field.
    """

    def __init__(self, root, multiplicity, max_jordan_block, eigenspace_in_one_perp, chain_contributes):
        self.root = root
        self.minpoly: list[int] = list(root.minpoly)
        self.algebraic_multiplicity = multiplicity
        self.max_jordan_block = max_jordan_block
        self.eigenspace_in_one_perp = eigenspace_in_one_perp
        self.chain_contributes = chain_contributes
        self.conjugate_partner: Eigenvalue | None = None
        self._abs2_minpoly = None
        self._abs2_interval = None

    # ----- shape queries -----

    @property
    def is_real(self) -> bool:
        return isinstance(self.root, RealRoot)

    @property
    def is_rational(self) -> bool:
        return self.is_real and self.root.is_rational

    @property
    def value(self) -> Fraction | None:
        return self.root.value if self.is_rational else None

    def interval(self) -> tuple[Fraction, Fraction] | None:
        return (self.root.lo, self.root.hi) if self.is_real else None

    def box(self):
        return None if self.is_real else self.root.box()

    # ----- certified magnitude -----

    def refine(self) -> None:
        self.root.refine()

    def abs2_interval(self) -> tuple[Fraction, Fraction]:
        return abs_square_interval(self.root)

    def abs2_minpoly(self) -> tuple[list[int], tuple[Fraction, Fraction]]:
        if self._abs2_minpoly is None:
            self._abs2_minpoly, self._abs2_interval = abs_square_minpoly(self.root)
        return self._abs2_minpoly, self._abs2_interval

    def abs2_rational(self) -> Fraction | None:
        """|lambda|^2 when it happens to be rational, else None."""
        if self.is_rational:
            return self.value * self.value
        m2, _ = self.abs2_minpoly()
        if poly_degree(m2) == 1:
            return Fraction(-m2[1], m2[0])
        return None

    def abs_bounds(self, width: Fraction = Fraction(1, 10**12)) -> tuple[Fraction, Fraction]:
        """Rational bounds on |lambda| of at most the requested width."""
        if self.is_rational:
            v = abs(self.value)
            return v, v
        scale = 2 * max(4, int(1 / width))
        while True:
            lo2, hi2 = self.abs2_interval()
            lo = sqrt_bounds(lo2, scale)[0]
            hi = sqrt_bounds(hi2, scale)[1]
            if hi - lo <= width:
                return lo, hi
            self.refine()
            scale *= 2

    def describe(self) -> str:
        if self.is_rational:
            return str(self.value)
        kind = "real" if self.is_real else "complex"
        return f"{kind} root of {_poly_str(self.minpoly)}"

    def __repr__(self):
        return (
            f"Eigenvalue({self.describe()}, mult={self.algebraic_multiplicity}, "
            f"k={self.max_jordan_block}, eig_in_one_perp={self.eigenspace_in_one_perp}, "
            f"chain_contributes={self.chain_contributes})"
        )


def _poly_str(coeffs) -> str:
    deg = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        p = deg - i
        xs = "" if p == 0 else ("x" if p == 1 else f"x^{p}")
        if xs and abs(c) == 1:
            cs = "-" if c < 0 else ""
        else:
            cs = str(c)
        terms.append(f"{cs}{xs}" if not terms else (f"+ {cs}{xs}" if c > 0 else f"- {cs.lstrip('-')}{xs}"))
    return " ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# certified comparisons between eigenvalue magnitudes


def cmp_abs(e1: Eigenvalue, e2: Eigenvalue) -> int:
    """-1, 0, +1 comparing |e1| with |e2|, exact."""
    if e1 is e2 or e1.conjugate_partner is e2:
        return 0
    if e1.is_rational and e2.is_rational:
        q1, q2 = abs(e1.value), abs(e2.value)
        return (q1 > q2) - (q1 < q2)
    for round_ in range(_REFINE_CAP):
        l1, h1 = e1.abs2_interval()
        l2, h2 = e2.abs2_interval()
        if h1 < l2:
            return -1
        if h2 < l1:
            return 1
        if round_ >= 2:
            m1, _ = e1.abs2_minpoly()
            m2, _ = e2.abs2_minpoly()
            if m1 == m2:
                hull_lo, hull_hi = min(l1, l2), max(h1, h2)
                if poly_degree(m1) == 1:
                    return 0
                if count_roots_closed(m1, hull_lo, hull_hi) == 1:
                    return 0
        e1.refine()
        e2.refine()
    raise RuntimeError("magnitude comparison did not converge")


def cmp_abs_rational(e: Eigenvalue, q: Fraction) -> int:
    """Compare |e| against a nonnegative rational, exact."""
    q2 = q * q
    r = e.abs2_rational()
    if r is not None:
        return (r > q2) - (r < q2)
    m2, _ = e.abs2_minpoly()
    if qlinalg.poly_eval(m2, q2) == 0:
        return 0
    for _ in range(_REFINE_CAP):
        lo, hi = e.abs2_interval()
        if hi < q2:
            return -1
        if lo > q2:
            return 1
        e.refine()
    raise RuntimeError("magnitude comparison did not converge")


def _real_part_interval(e: Eigenvalue) -> tuple[Fraction, Fraction]:
    if e.is_real:
        return (e.root.lo, e.root.hi)
    return (e.root.ax, e.root.bx)


def _cmp_real_part(e1: Eigenvalue, e2: Eigenvalue) -> int:
    if e1.is_rational and e2.is_rational:
        v1, v2 = e1.value, e2.value
        return (v1 > v2) - (v1 < v2)
    if e1.conjugate_partner is e2:
        return 0
    for _ in range(_REFINE_CAP):
        l1, h1 = _real_part_interval(e1)
        l2, h2 = _real_part_interval(e2)
        if h1 < l2:
            return -1
        if h2 < l1:
            return 1
        e1.refine()
        e2.refine()
    raise RuntimeError("real-part comparison did not converge")


def _imag_positive(e: Eigenvalue) -> bool:
    if e.is_real:
        return False
    for _ in range(_REFINE_CAP):
        if e.root.ay > 0:
            return True
        if e.root.by < 0:
            return False
        e.refine()
    raise RuntimeError("imaginary sign did not resolve")


def _cmp_sort(e1: Eigenvalue, e2: Eigenvalue) -> int:
    c = cmp_abs(e1, e2)
    if c:
        return -c  # descending |lambda|
    c = _cmp_real_part(e1, e2)
    if c:
        return -c  # descending real part
    if e1 is e2:
        return 0
    # conjugate pair: imaginary part >= 0 first
    return -1 if _imag_positive(e1) else 1


# ---------------------------------------------------------------------------
# decomposition


def _factor_jordan_data(A, factor: list[int], exponent: int, n: int):
    """(max_block, eigenspace_in_one_perp, chain_contributes), computed once
    per irreducible factor over Q[x]/(factor); shared by all its roots."""
    K = NumberField(factor)
    M = K.mat_sub_scalar(A, K.generator())
    ones = [1] * n
    r1 = K.rank(M)
    eig_in_perp = K.rank(K.with_extra_row(M, ones)) == r1
    if exponent == 1:
        return 1, eig_in_perp, not eig_in_perp
    ranks = [n, r1]
    P = M
    while ranks[-1] != ranks[-2]:
        P = K.mat_mul(P, M)
        ranks.append(K.rank(P))
        if len(ranks) > exponent + 1:
            break
    blocks_ge = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    max_block = max(j for j, b in enumerate(blocks_ge, start=1) if b > 0)
    assert sum(blocks_ge) == exponent, "Jordan structure inconsistent with multiplicity"
    # generalized eigenspace = ker((A - theta)^max_block)
    Pstab = M
    for _ in range(max_block - 1):
        Pstab = K.mat_mul(Pstab, M)
    rstab = K.rank(Pstab)
    chain_in_perp = K.rank(K.with_extra_row(Pstab, ones)) == rstab
    return max_block, eig_in_perp, not chain_in_perp


def _boxes_meet(b1, b2) -> bool:
    return b1[0] <= b2[1] and b2[0] <= b1[1] and b1[2] <= b2[3] and b2[2] <= b1[3]


def _pair_conjugates(eigs: list[Eigenvalue]) -> None:
    """Mark conjugate partners within each irreducible factor.

    The conjugate of a root is a root of the same factor; it is the unique
    one whose isolating box keeps meeting the mirrored box under refinement.
    """
    by_factor: dict[tuple, list[Eigenvalue]] = {}
    for e in eigs:
        if not e.is_real:
            by_factor.setdefault(tuple(e.minpoly), []).append(e)
    for group in by_factor.values():
        unmatched = list(group)
        while unmatched:
            e = unmatched.pop(0)
            for _ in range(_REFINE_CAP):
                mirror = (e.root.ax, e.root.bx, -e.root.by, -e.root.ay)
                cands = [f for f in unmatched if _boxes_meet(mirror, f.root.box())]
                if len(cands) == 1:
                    f = cands[0]
                    e.conjugate_partner = f
                    f.conjugate_partner = e
                    unmatched.remove(f)
                    break
                for f in [e] + unmatched:
                    f.refine()
            else:
                raise RuntimeError("failed to pair a conjugate root")


def eigen_decompose(A, lambda1: Fraction | None = None, require_primitive: bool = True) -> list[Eigenvalue]:
    """All distinct eigenvalues of A, sorted by descending |lambda| with the
    documented tie order, carrying Jordan and orthogonality data."""
    n = len(A)
    if require_primitive:
        ok, _ = primitivity_check(A)
        if not ok:
            raise NonPrimitiveError("matrix is not primitive")
    cp = char_poly(A)
    eigs: list[Eigenvalue] = []
    for factor, exponent in factor_int_poly(list(cp.coefficients)):
        max_block, eig_perp, chain = _factor_jordan_data(A, factor, exponent, n)
        for root in isolate_real_roots(factor):
            eigs.append(Eigenvalue(root, exponent, max_block, eig_perp, chain))
        for root in isolate_complex_roots(factor):
            eigs.append(Eigenvalue(root, exponent, max_block, eig_perp, chain))
    assert sum(e.algebraic_multiplicity for e in eigs) == n
    _pair_conjugates(eigs)
    eigs.sort(key=functools.cmp_to_key(_cmp_sort))
    top = eigs[0]
    if require_primitive:
        if not (top.is_real and top.algebraic_multiplicity == 1 and top.root.sign() > 0):
            raise PerronMismatchError("dominant eigenvalue is not a simple positive real")
        if len(eigs) > 1 and cmp_abs(top, eigs[1]) != 1:
            raise PerronMismatchError("dominant eigenvalue is not strictly dominant")
    if lambda1 is not None:
        if not top.is_rational or top.value != lambda1:
            raise PerronMismatchError(f"expected dominant eigenvalue {lambda1}, found {top.describe()}")
    return eigs


def perron_data(A, volumes) -> tuple[Fraction, list[Fraction], list[Fraction], Fraction]:
    """(lambda1, v1, u1, alpha) with v1 normalized to first coordinate 1.

    `volumes` must already be the left eigenvector of A for lambda1; this is
    the rule/volume consistency check, not a derived quantity.
    """
    n = len(A)
    u1 = [Fraction(v) for v in volumes]
    if any(v <= 0 for v in u1):
        raise AnalysisError("volumes must be strictly positive")
    lam = sum(u1[i] * A[i][0] for i in range(n)) / u1[0]
    if not check_left_eigenvector(A, u1, lam):
        raise PerronMismatchError("volumes are not a left eigenvector of the count matrix")
    ok, _ = primitivity_check(A)
    if not ok:
        raise NonPrimitiveError("matrix is not primitive")
    M = [[Fraction(A[i][j]) - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    kernel = qlinalg.kernel_basis(M)
    if len(kernel) != 1:
        raise PerronMismatchError("dominant eigenspace is not one-dimensional")
    v1 = kernel[0]
    v1 = [x / v1[0] for x in v1]
    if any(x <= 0 for x in v1):
        raise PerronMismatchError("dominant eigenvector is not strictly positive")
    alpha = sum(v1) / qlinalg.dot(u1, v1)
    return lam, v1, u1, alpha


@dataclass
class SpectralReport:
    matrix: tuple[tuple[int, ...], ...]
    charpoly: CharPoly
    eigenvalues: list[Eigenvalue]
    lambda1: Fraction | None  # rational dominant eigenvalue when available
    v1: list[Fraction] | None
    u1: list[Fraction] | None
    alpha: Fraction | None
    t: int | None
    k_t: int | None
    lambda_t: Eigenvalue | None
    primitivity_exponent: int = 0
    magnitude_classes: list[list[Eigenvalue]] = field(default_factory=list)

    @property
    def lambda1_eigenvalue(self) -> Eigenvalue:
        return self.eigenvalues[0]

    @property
    def n(self) -> int:
        return len(self.matrix)


def magnitude_classes(eigs: list[Eigenvalue]) -> list[list[Eigenvalue]]:
    """Group the sorted eigenvalues into runs of certified equal |lambda|."""
    classes: list[list[Eigenvalue]] = []
    for e in eigs:
        if classes and cmp_abs(classes[-1][0], e) == 0:
            classes[-1].append(e)
        else:
            classes.append([e])
    return classes


def find_t(eigs_or_classes) -> tuple[int, Eigenvalue, int] | None:
    """The minimal with-multiplicity index t >= 2 whose magnitude class has a
    generalized eigenvector not orthogonal to the all-ones vector.

    Returns (t, eigenvalue, k_t) where the eigenvalue is the first
    contributing member of the class and k_t the largest Jordan block among
    the contributing members; None when no class contributes.
    """
    if eigs_or_classes and isinstance(eigs_or_classes[0], Eigenvalue):
        classes = magnitude_classes(eigs_or_classes)
    else:
        classes = eigs_or_classes
    idx = 1 + sum(e.algebraic_multiplicity for e in classes[0])
    for cls in classes[1:]:
        contributing = [e for e in cls if e.chain_contributes]
        if contributing:
            k_t = max(e.max_jordan_block for e in contributing)
            return idx, contributing[0], k_t
        idx += sum(e.algebraic_multiplicity for e in cls)
    return None


def analyze_matrix(A, volumes=None, lambda1: Fraction | None = None) -> SpectralReport:
    """Full spectral report for a primitive nonnegative integer matrix.

    When `volumes` is given it must satisfy the left-eigenvector identity and
    yields exact Perron data (requires a rational dominant eigenvalue);
    otherwise the density block of the report stays empty.
    """
    A = [list(map(int, row)) for row in A]
    ok, expo = primitivity_check(A)
    if not ok:
        raise NonPrimitiveError("matrix is not primitive")
    eigs = eigen_decompose(A, lambda1=lambda1)
    lam_rat = eigs[0].value  # None when irrational
    v1 = u1 = alpha = None
    if volumes is not None:
        lam_rat, v1, u1, alpha = perron_data(A, volumes)
        if lambda1 is not None and lam_rat != lambda1:
            raise PerronMismatchError(f"volumes imply dominant eigenvalue {lam_rat}, expected {lambda1}")
    classes = magnitude_classes(eigs)
    tdata = find_t(classes)
    t, lam_t, k_t = tdata if tdata else (None, None, None)
    return SpectralReport(
        matrix=tuple(tuple(row) for row in A),
        charpoly=char_poly(A),
        eigenvalues=eigs,
        lambda1=lam_rat,
        v1=v1,
        u1=u1,
        alpha=alpha,
        t=t,
        k_t=k_t,
        lambda_t=lam_t,
        primitivity_exponent=expo,
        magnitude_classes=classes,
    )


def analyze_ruleset(rs: RuleSet) -> SpectralReport:
    A = substitution_matrix(rs)
    return analyze_matrix(A, volumes=rs.volumes(), lambda1=rs.lambda1)


# ---------------------------------------------------------------------------
# serialization helpers (used by the CLI)


def _rat_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def eigenvalue_to_jsonable(e: Eigenvalue, abs_width: Fraction = Fraction(1, 10**12)) -> dict:
    lo, hi = e.abs_bounds(abs_width)
    out = {
        "min_poly": list(e.minpoly),
        "is_real": e.is_real,
        "value": _rat_str(e.value) if e.is_rational else None,
        "abs_lower": _rat_str(lo),
        "abs_upper": _rat_str(hi),
        "algebraic_multiplicity": e.algebraic_multiplicity,
        "max_jordan_block": e.max_jordan_block,
        "eigenspace_in_one_perp": e.eigenspace_in_one_perp,
        "chain_contributes": e.chain_contributes,
    }
    if e.is_real:
        out["isolating_interval"] = [_rat_str(e.root.lo), _rat_str(e.root.hi)]
    else:
        out["isolating_box"] = [_rat_str(b) for b in e.root.box()]
    return out


def report_to_jsonable(report: SpectralReport) -> dict:
    return {
        "matrix": [list(r) for r in report.matrix],
        "char_poly": list(report.charpoly.coefficients),
        "eigenvalues": [eigenvalue_to_jsonable(e) for e in report.eigenvalues],
        "lambda1": _rat_str(report.lambda1) if report.lambda1 is not None else None,
        "v1": [_rat_str(x) for x in report.v1] if report.v1 else None,
        "u1": [_rat_str(x) for x in report.u1] if report.u1 else None,
        "alpha": _rat_str(report.alpha) if report.alpha is not None else None,
        "t": report.t,
        "k_t": report.k_t,
        "lambda_t": report.lambda_t.describe() if report.lambda_t else None,
        "primitivity_exponent": report.primitivity_exponent,
    }

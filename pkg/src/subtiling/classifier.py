"""Bounded-displacement classification from the spectral report.

The decision compares |lambda_t|^d with lambda_1^(d-1) in exact arithmetic
(equivalent to the fractional-power comparison, but never leaves rationals
and certified algebraic numbers).  Equality with a nontrivial Jordan block is
decisive; equality with a trivial block is reported as an open case, never
coerced to a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebraic import element_power_minpoly, element_power_rational, poly_degree
from .spectra import Eigenvalue, SpectralReport, analyze_matrix

__all__ = ["Comparison", "Classification", "compare_abs_power", "classify", "classify_matrix"]

LESS, EQUAL, GREATER, INDETERMINATE = "Less", "Equal", "Greater", "Indeterminate"

#: interval width below which comparison gives up without an exact certificate
PRECISION_CAP = Fraction(1, 10**30)


@dataclass(frozen=True)
class Comparison:
    relation: str  # Less | Equal | Greater | Indeterminate
    detail: str


@dataclass(frozen=True)
class Classification:
    verdict: str  # BD | NotBD | OpenEquality | IndeterminatePrecision
    case_tag: str  # I | II | III-jordan | III-open | no-t | indeterminate
    certificate: str


def _compare_abs2_power_rational(e: Eigenvalue, d: int, target: Fraction, cap: Fraction) -> Comparison:
    """Compare (|e|^2)^d against the rational target, certified."""
    q = e.abs2_rational()
    if q is not None:
        v = q**d
        rel = GREATER if v > target else LESS if v < target else EQUAL
        return Comparison(rel, f"|lambda_t|^(2d) = {v} vs lambda_1^(2(d-1)) = {target}")
    m2, _ = e.abs2_minpoly()
    p = element_power_rational(m2, d)
    if p is not None:
        rel = GREATER if p > target else LESS if p < target else EQUAL
        return Comparison(rel, f"(|lambda_t|^2)^{d} = {p} exactly (power of algebraic magnitude) vs {target}")
    # the d-th power of |lambda_t|^2 is irrational, hence never equal: separate
    while True:
        lo, hi = e.abs2_interval()
        if hi**d < target:
            return Comparison(LESS, f"certified ((|lambda_t|^2)^{d} <= {hi**d} < {target})")
        if lo**d > target:
            return Comparison(GREATER, f"certified ((|lambda_t|^2)^{d} >= {lo**d} > {target})")
        if hi - lo < cap:
            return Comparison(INDETERMINATE, f"interval width below cap {cap} without exact certificate")
        e.refine()


def compare_abs_power(lam: Eigenvalue | Fraction, lambda1, d: int, cap: Fraction = PRECISION_CAP) -> Comparison:
    """Decide |lam|^d versus lambda1^(d-1) via the squared quantities.

    `lambda1` may be a Fraction or the dominant Eigenvalue itself (the latter
    covers irrational dominant roots); the result is exact unless refinement
    hits the precision cap without an equality certificate.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    lam1_rational = lambda1 if isinstance(lambda1, Fraction) else lambda1.value
    if isinstance(lam, Fraction):
        if lam1_rational is not None:
            v, w = abs(lam) ** d, lam1_rational ** (d - 1)
            rel = GREATER if v > w else LESS if v < w else EQUAL
            return Comparison(rel, f"|lambda_t|^{d} = {v} vs lambda_1^{d-1} = {w}")
        return _compare_rational_vs_eig_power(lam, lambda1, d, cap)
    if lam1_rational is not None:
        target = lam1_rational ** (2 * (d - 1))
        return _compare_abs2_power_rational(lam, d, target, cap)
    return _compare_two_eig_powers(lam, lambda1, d, cap)


def _compare_rational_vs_eig_power(lam: Fraction, lambda1: Eigenvalue, d: int, cap: Fraction) -> Comparison:
    """|lam|^d (rational) vs lambda1^(d-1) with irrational dominant root."""
    v = abs(lam) ** (2 * d)
    m2, _ = lambda1.abs2_minpoly()
    p = element_power_rational(m2, d - 1)
    if p is not None:
        rel = GREATER if v > p else LESS if v < p else EQUAL
        return Comparison(rel, f"|lambda_t|^(2d) = {v} vs lambda_1^(2(d-1)) = {p} exactly")
    while True:
        lo, hi = lambda1.abs2_interval()
        if hi ** (d - 1) < v:
            return Comparison(GREATER, f"certified (lambda_1^(2(d-1)) <= {hi ** (d - 1)} < {v})")
        if lo ** (d - 1) > v:
            return Comparison(LESS, f"certified (lambda_1^(2(d-1)) >= {lo ** (d - 1)} > {v})")
        if hi - lo < cap:
            return Comparison(INDETERMINATE, f"interval width below cap {cap} without exact certificate")
        lambda1.refine()


def _compare_two_eig_powers(lam: Eigenvalue, lambda1: Eigenvalue, d: int, cap: Fraction) -> Comparison:
    """Both sides algebraic: compare (|lam|^2)^d vs (|lambda1|^2)^(d-1)."""
    m2a, _ = lam.abs2_minpoly()
    m2b, _ = lambda1.abs2_minpoly()
    pa = element_power_rational(m2a, d)
    pb = element_power_rational(m2b, d - 1)
    if pa is not None and pb is not None:
        rel = GREATER if pa > pb else LESS if pa < pb else EQUAL
        return Comparison(rel, f"(|lambda_t|^2)^{d} = {pa} vs (lambda_1^2)^{d-1} = {pb} exactly")
    if pa is not None:
        c = _compare_rational_power_vs(pa, lambda1, d - 1, cap)
        return Comparison({LESS: GREATER, GREATER: LESS, EQUAL: EQUAL, INDETERMINATE: INDETERMINATE}[c.relation], c.detail)
    if pb is not None:
        return _compare_eig_power_vs_rational(lam, d, pb, cap)
    # both powers irrational; equality would require a shared minimal
    # polynomial root, certified via the same-power identity below
    same = _same_abs2_power(lam, lambda1, d)
    if same:
        return Comparison(EQUAL, same)
    while True:
        la, ha = lam.abs2_interval()
        lb, hb = lambda1.abs2_interval()
        if ha**d < lb ** (d - 1):
            return Comparison(LESS, "certified by interval separation of the squared powers")
        if la**d > hb ** (d - 1):
            return Comparison(GREATER, "certified by interval separation of the squared powers")
        if ha - la < cap and hb - lb < cap:
            return Comparison(INDETERMINATE, f"interval width below cap {cap} without exact certificate")
        lam.refine()
        lambda1.refine()


def _compare_eig_power_vs_rational(lam: Eigenvalue, d: int, target: Fraction, cap: Fraction) -> Comparison:
    return _compare_abs2_power_rational(lam, d, target, cap)


def _compare_rational_power_vs(value: Fraction, e: Eigenvalue, power: int, cap: Fraction) -> Comparison:
    """Compare (|e|^2)^power against a rational value (relation of e's side)."""
    m2, _ = e.abs2_minpoly()
    p = element_power_rational(m2, power)
    if p is not None:
        rel = GREATER if p > value else LESS if p < value else EQUAL
        return Comparison(rel, f"(|lambda|^2)^{power} = {p} vs {value} exactly")
    while True:
        lo, hi = e.abs2_interval()
        if hi**power < value:
            return Comparison(LESS, "certified by interval separation")
        if lo**power > value:
            return Comparison(GREATER, "certified by interval separation")
        if hi - lo < cap:
            return Comparison(INDETERMINATE, f"interval width below cap {cap} without exact certificate")
        e.refine()


def _same_abs2_power(lam: Eigenvalue, lambda1: Eigenvalue, d: int) -> str | None:
    """Exact certificate that (|lam|^2)^d equals (|lambda1|^2)^(d-1).

    Both powers are elements of number fields; equality of two irrational
    algebraic numbers holds iff they share a minimal polynomial and the same
    isolating root, decided via the power-element characteristic polynomial.
    """
    from .algebraic import count_roots_closed

    m2a, _ = lam.abs2_minpoly()
    m2b, _ = lambda1.abs2_minpoly()
    pa = element_power_minpoly(m2a, d)
    pb = element_power_minpoly(m2b, d - 1)
    if pa != pb:
        return None
    if poly_degree(pa) == 1:
        return f"both powers equal {Fraction(-pa[1], pa[0])}"
    for _ in range(200):
        la, ha = lam.abs2_interval()
        lb, hb = lambda1.abs2_interval()
        lo, hi = min(la**d, lb ** (d - 1)), max(ha**d, hb ** (d - 1))
        if count_roots_closed(pa, lo, hi) == 1:
            if ha**d < lb ** (d - 1) or hb ** (d - 1) < la**d:
                return None
            return f"both powers are the unique root of {pa} in ({lo}, {hi}]"
        if ha**d < lb ** (d - 1) or hb ** (d - 1) < la**d:
            return None
        lam.refine()
        lambda1.refine()
    return None


def classify(report: SpectralReport, d: int, cap: Fraction = PRECISION_CAP, note: str = "") -> Classification:
    """Theorem-style verdict from the report for ambient dimension d."""
    lam1 = report.lambda1 if report.lambda1 is not None else report.lambda1_eigenvalue
    lines = [
        f"n = {report.n}, d = {d}",
        f"lambda_1 = {report.lambda1 if report.lambda1 is not None else report.lambda1_eigenvalue.describe()}",
    ]
    if report.t is None:
        lines.append("no index t >= 2: every eigenvalue class beyond the first has its generalized eigenspace orthogonal to the all-ones vector")
        cert = "\n".join(lines + ([note] if note else []))
        return Classification("BD", "no-t", cert)
    lam_t = report.lambda_t
    lines.append(f"t = {report.t}, lambda_t = {lam_t.describe()}, k_t = {report.k_t}")
    cmp_ = compare_abs_power(lam_t.value if lam_t.is_rational else lam_t, lam1, d, cap)
    lines.append(f"comparison |lambda_t|^d vs lambda_1^(d-1): {cmp_.relation} ({cmp_.detail})")
    if cmp_.relation == GREATER:
        verdict, tag = "NotBD", "I"
    elif cmp_.relation == LESS:
        verdict, tag = "BD", "II"
    elif cmp_.relation == EQUAL:
        if report.k_t and report.k_t > 1:
            verdict, tag = "NotBD", "III-jordan"
            lines.append("equality with a nontrivial Jordan block is decisive")
        else:
            verdict, tag = "OpenEquality", "III-open"
            lines.append("equality with a trivial Jordan block is not decided in general")
    else:
        verdict, tag = "IndeterminatePrecision", "indeterminate"
    if note:
        lines.append(note)
    return Classification(verdict, tag, "\n".join(lines))


def classify_matrix(A, d: int, volumes=None, lambda1: Fraction | None = None, cap: Fraction = PRECISION_CAP, note: str = "") -> Classification:
    """Analyze and classify a raw count matrix (volumes optional)."""
    report = analyze_matrix(A, volumes=volumes, lambda1=lambda1)
    return classify(report, d, cap, note)

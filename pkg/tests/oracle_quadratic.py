"""Independent 2x2 classifier used as an oracle.

Everything here is computed from the quadratic formula with exact arithmetic
in Q(sqrt(D)) and shares no code with the package's spectral machinery: the
eigenvalues, the distinguished index, and the power comparison are all done
from scratch on (p + q*sqrt(D)) pairs.
"""

from __future__ import annotations

import math
from fractions import Fraction


def is_primitive_2x2(A) -> bool:
    (a, b), (c, d) = A
    if min(a, b, c, d) < 0:
        return False
    M = A
    for _ in range(2):  # Wielandt bound for n = 2
        if all(x > 0 for row in M for x in row):
            return True
        M = [
            [M[0][0] * A[0][0] + M[0][1] * A[1][0], M[0][0] * A[0][1] + M[0][1] * A[1][1]],
            [M[1][0] * A[0][0] + M[1][1] * A[1][0], M[1][0] * A[0][1] + M[1][1] * A[1][1]],
        ]
    return False


class QuadElt:
    """p + q*sqrt(D) with rational p, q and fixed non-square D > 0."""

    __slots__ = ("p", "q", "D")

    def __init__(self, p, q, D):
        self.p = Fraction(p)
        self.q = Fraction(q)
        self.D = D

    def mul(self, other: "QuadElt") -> "QuadElt":
        return QuadElt(self.p * other.p + self.q * other.q * self.D, self.p * other.q + self.q * other.p, self.D)

    def power(self, n: int) -> "QuadElt":
        out = QuadElt(1, 0, self.D)
        base = self
        while n:
            if n & 1:
                out = out.mul(base)
            n >>= 1
            if n:
                base = base.mul(base)
        return out

    def neg(self) -> "QuadElt":
        return QuadElt(-self.p, -self.q, self.D)

    def sign(self) -> int:
        p, q, D = self.p, self.q, self.D
        if q == 0:
            return (p > 0) - (p < 0)
        if p == 0:
            return 1 if q > 0 else -1
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # opposite signs: compare p^2 with q^2 D (sqrt(D) irrational, never 0)
        if q > 0:  # p < 0
            return 1 if q * q * D > p * p else -1
        return 1 if p * p > q * q * D else -1

    def cmp(self, other: "QuadElt") -> int:
        return QuadElt(self.p - other.p, self.q - other.q, self.D).sign()


def classify_2x2_oracle(A, d: int) -> tuple[str, str]:
    """(verdict, case) for a primitive 2x2 nonnegative integer matrix."""
    (a, b), (c, dd) = A
    assert is_primitive_2x2(A), "oracle requires a primitive matrix"
    tr = a + dd
    det = a * dd - b * c
    D = tr * tr - 4 * det
    assert D > 0, "primitive 2x2 matrices have distinct real eigenvalues"
    r = math.isqrt(D)
    if r * r == D:
        # rational eigenvalues
        lam1 = Fraction(tr + r, 2)
        lam2 = Fraction(tr - r, 2)
        assert lam1 > abs(lam2)
        # eigenvector for lam2: (b, lam2 - a); b >= 1 for primitive matrices
        one_dot = b + lam2 - a
        if one_dot == 0:
            return "BD", "no-t"
        lhs = abs(lam2) ** d
        rhs = lam1 ** (d - 1)
        if lhs > rhs:
            return "NotBD", "I"
        if lhs < rhs:
            return "BD", "II"
        return "OpenEquality", "III-open"  # blocks are trivial: eigenvalues distinct
    # irrational conjugate pair: <1, v_2> has sqrt coefficient -1/2 != 0, so
    # the second eigenspace is never orthogonal to the all-ones vector
    lam1 = QuadElt(Fraction(tr, 2), Fraction(1, 2), D)
    lam2 = QuadElt(Fraction(tr, 2), Fraction(-1, 2), D)
    abs2 = lam2 if lam2.sign() > 0 else lam2.neg()
    lhs = abs2.power(d)
    rhs = lam1.power(d - 1)
    cmp_ = lhs.cmp(rhs)
    if cmp_ > 0:
        return "NotBD", "I"
    if cmp_ < 0:
        return "BD", "II"
    return "OpenEquality", "III-open"

"""Exact linear algebra over Q and over number fields Q[x]/(p).

Ranks of (A - theta*I)^j over the field generated by an eigenvalue theta give
Jordan block data and the orthogonality flags without ever leaving exact
arithmetic.  Field elements are coefficient tuples (ascending degree, length
= deg p); Q is the degenerate degree-1 case.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class NumberField:
    """Q[x]/(p) for a monic-normalizable irreducible integer polynomial p."""

    def __init__(self, minpoly: Sequence):
        lead = Fraction(minpoly[0])
        self.minpoly = [Fraction(c) / lead for c in minpoly]  # monic, descending
        self.degree = len(self.minpoly) - 1
        if self.degree < 1:
            raise ValueError("constant minimal polynomial")

    # elements: tuples of Fractions, ascending degree, length == self.degree

    def zero(self):
        return (Fraction(0),) * self.degree

    def one(self):
        return self.from_rational(Fraction(1))

    def from_rational(self, q) -> tuple:
        e = [Fraction(0)] * self.degree
        e[0] = Fraction(q)
        return tuple(e)

    def generator(self) -> tuple:
        if self.degree == 1:
            # x == root: the field is Q, generator is the rational root itself
            return (-self.minpoly[1],)
        e = [Fraction(0)] * self.degree
        e[1] = Fraction(1)
        return tuple(e)

    def is_zero(self, a) -> bool:
        return all(c == 0 for c in a)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        if self.degree == 1:
            return (a[0] * b[0],)
        prod = [Fraction(0)] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        # reduce x^k for k >= degree using x^deg = -(lower terms)
        red = [-c for c in self.minpoly[1:]][::-1]  # x^deg in ascending coeffs
        for k in range(len(prod) - 1, self.degree - 1, -1):
            c = prod[k]
            if c:
                prod[k] = Fraction(0)
                for i, r in enumerate(red):
                    prod[k - self.degree + i] += c * r
        return tuple(prod[: self.degree])

    def inv(self, a):
        """Inverse by extended Euclid on (a as polynomial, minpoly)."""
        if self.is_zero(a):
            raise ZeroDivisionError("inverting zero field element")
        if self.degree == 1:
            return (1 / a[0],)
        # polynomials ascending; invariant: r = s * a (mod minpoly)
        r0 = list(self.minpoly[::-1])  # ascending
        r1 = list(a)
        s0 = [Fraction(0)]
        s1 = [Fraction(1)]

        def deg(p):
            d = len(p) - 1
            while d > 0 and p[d] == 0:
                d -= 1
            return d if any(c != 0 for c in p) else -1

        def sub_scaled(p, q, c, shift):
            out = list(p) + [Fraction(0)] * max(0, deg(q) + shift + 1 - len(p))
            for i in range(deg(q) + 1):
                out[i + shift] -= c * q[i]
            return out

        while deg(r1) > 0:
            while deg(r0) >= deg(r1):
                d0, d1 = deg(r0), deg(r1)
                c = r0[d0] / r1[d1]
                r0 = sub_scaled(r0, r1, c, d0 - d1)
                s0 = sub_scaled(s0, s1, c, d0 - d1)
            r0, r1, s0, s1 = r1, r0, s1, s0
        if deg(r1) != 0:
            raise ZeroDivisionError("element not invertible (reducible minpoly?)")
        c = r1[0]
        out = [x / c for x in s1]
        out += [Fraction(0)] * (self.degree - len(out))
        return tuple(out[: self.degree])

    # ----- matrices over the field -----

    def mat_from_rational(self, A: Sequence[Sequence]) -> list[list[tuple]]:
        return [[self.from_rational(x) for x in row] for row in A]

    def mat_sub_scalar(self, A, theta) -> list[list[tuple]]:
        """A - theta*I for a rational matrix A and field element theta."""
        n = len(A)
        M = self.mat_from_rational(A)
        for i in range(n):
            M[i][i] = self.sub(M[i][i], theta)
        return M

    def mat_mul(self, A, B):
        n, k, m = len(A), len(B), len(B[0])
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                s = self.zero()
                for t in range(k):
                    s = self.add(s, self.mul(A[i][t], B[t][j]))
                row.append(s)
            out.append(row)
        return out

    def rank(self, A) -> int:
        """Gaussian elimination rank; destructive on a copy."""
        if not A:
            return 0
        M = [row[:] for row in A]
        rows, cols = len(M), len(M[0])
        r = 0
        for c in range(cols):
            piv = None
            for i in range(r, rows):
                if not self.is_zero(M[i][c]):
                    piv = i
                    break
            if piv is None:
                continue
            M[r], M[piv] = M[piv], M[r]
            inv = self.inv(M[r][c])
            M[r] = [self.mul(inv, x) for x in M[r]]
            for i in range(r + 1, rows):
                f = M[i][c]
                if not self.is_zero(f):
                    M[i] = [self.sub(x, self.mul(f, y)) for x, y in zip(M[i], M[r])]
            r += 1
            if r == rows:
                break
        return r

    def with_extra_row(self, A, row_rational) -> list:
        return A + [[self.from_rational(x) for x in row_rational]]

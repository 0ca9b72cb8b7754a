"""Exact linear algebra over the rationals and the integers.

Everything here works on plain lists (matrices are lists of rows) holding
``int`` or ``fractions.Fraction`` entries.  No floats anywhere: these routines
back the certified spectral analysis, so exactness is the whole point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vec = list
Mat = list


def identity(n: int) -> Mat:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A: Mat, B: Mat) -> Mat:
    n, k, m = len(A), len(B), len(B[0])
    assert len(A[0]) == k
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(m):
            s = 0
            for t in range(k):
                s += Ai[t] * B[t][j]
            row.append(s)
        out.append(row)
    return out


def mat_vec(A: Mat, v: Sequence) -> Vec:
    return [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A))]


def vec_mat(v: Sequence, A: Mat) -> Vec:
    return [sum(v[i] * A[i][j] for i in range(len(v))) for j in range(len(A[0]))]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v, strict=True))


def mat_pow(A: Mat, m: int) -> Mat:
    """A**m by repeated squaring; exact for integer matrices of any size."""
    n = len(A)
    result = identity(n)
    base = [row[:] for row in A]
    while m > 0:
        if m & 1:
            result = mat_mul(result, base)
        m >>= 1
        if m:
            base = mat_mul(base, base)
    return result


def mat_scale_add(A: Mat, c, B: Mat) -> Mat:
    """A + c*B."""
    return [[A[i][j] + c * B[i][j] for j in range(len(A[0]))] for i in range(len(A))]


def bareiss_det(A: Mat) -> int:
    """Determinant of an integer matrix by fraction-free (Bareiss) elimination.

    Used as the independent determinant oracle against the characteristic
    polynomial: intermediate values stay integers throughout.
    """
    n = len(A)
    if n == 0:
        return 1
    M = [[int(x) for x in row] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def berkowitz_charpoly(A: Mat) -> list[int]:
    """Coefficients of det(xI - A), monic, descending degree.

    Samuelson-Berkowitz: division-free, so integer input gives integer
    output with no intermediate fractions.
    """
    n = len(A)
    if n == 0:
        return [1]
    A = [[int(x) for x in row] for row in A]
    # charpoly vector of the trailing 1x1 block, [1, -a]
    vec = [1, -A[n - 1][n - 1]]
    for k in range(n - 2, -1, -1):
        # leading element a, row R, column C, trailing block B of the
        # (n-k) x (n-k) lower-right submatrix
        a = A[k][k]
        R = A[k][k + 1 :]
        C = [A[i][k] for i in range(k + 1, n)]
        B = [row[k + 1 :] for row in A[k + 1 :]]
        m = n - k
        # first column of the Toeplitz multiplier: 1, -a, -R C, -R B C, ...
        col = [1, -a]
        w = C
        for _ in range(m - 1):
            col.append(-dot(R, w))
            w = mat_vec(B, w)
        new = [0] * (m + 1)
        for i in range(m + 1):
            s = 0
            for j in range(len(vec)):
                if 0 <= i - j <= m:
                    if i - j < len(col):
                        s += col[i - j] * vec[j]
            new[i] = s
        vec = new
    return vec


def poly_eval(coeffs: Sequence, x):
    """Evaluate a polynomial given by descending coefficients (Horner)."""
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _as_fraction_rows(A: Mat) -> Mat:
    return [[Fraction(x) for x in row] for row in A]


def rref(A: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form over Q.  Returns (R, pivot column indices)."""
    M = _as_fraction_rows(A)
    if not M:
        return M, []
    rows, cols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if M[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return M, pivots


def rank(A: Mat) -> int:
    return len(rref(A)[1])


def kernel_basis(A: Mat) -> list[Vec]:
    """Basis of the right kernel over Q (columns = variables)."""
    if not A:
        return []
    R, pivots = rref(A)
    cols = len(A[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def in_row_space(A: Mat, v: Sequence) -> bool:
    """Whether v lies in the row space of A (exact rank test)."""
    return rank(A + [list(v)]) == rank(A)


def solve_right(A: Mat, b: Sequence) -> Vec | None:
    """One exact solution of A x = b, or None if inconsistent."""
    rows = len(A)
    aug = [list(map(Fraction, A[i])) + [Fraction(b[i])] for i in range(rows)]
    R, pivots = rref(aug)
    cols = len(A[0])
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][cols]
    return x

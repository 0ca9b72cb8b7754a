import random
from fractions import Fraction

import pytest

from subtiling.algebraic import isolate_real_roots
from subtiling.numberfield import NumberField
from subtiling.qlinalg import bareiss_det, dot, kernel_basis, mat_pow, mat_vec, poly_eval
from subtiling.ruleset import primitivity_check, substitution_matrix
from subtiling.spectra import (
    NonPrimitiveError,
    PerronMismatchError,
    analyze_matrix,
    char_poly,
    cmp_abs,
    eigen_decompose,
    find_t,
    perron_data,
)


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def test_char_poly_hand_oracle_2x2():
    # det(xI - A) for [[6,1],[4,6]] expanded by hand: (x-6)^2 - 4
    assert char_poly([[6, 1], [4, 6]]).coefficients == (1, -12, 32)


def test_char_poly_identity():
    for n in range(1, 5):
        eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        expect = [1]
        for _ in range(n):
            expect = poly_mul(expect, [1, -1])
        assert list(char_poly(eye).coefficients) == expect


def test_char_poly_s5_ex1_roots(rs_ex1):
    # product of the printed eigenvalue linear factors
    expect = [1]
    for r in (9, 4, 1, -1):
        expect = poly_mul(expect, [1, -r])
    assert list(char_poly(substitution_matrix(rs_ex1)).coefficients) == expect


def test_char_poly_det_identity_random():
    rng = random.Random(20240811)
    for _ in range(50):
        n = rng.randrange(1, 7)
        A = [[rng.randrange(-4, 7) for _ in range(n)] for _ in range(n)]
        cp = char_poly(A).coefficients
        # p(x) = det(xI - A): compare against fraction-free elimination
        assert poly_eval(cp, 0) == bareiss_det([[-x for x in row] for row in A])
        eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        for x in (1, -1):
            M = [[x * eye[i][j] - A[i][j] for j in range(n)] for i in range(n)]
            assert poly_eval(cp, x) == bareiss_det(M)


def test_eigen_multiplicities_sum_random_primitive():
    rng = random.Random(7)
    found = 0
    while found < 12:
        n = rng.randrange(2, 7)
        A = [[rng.randrange(0, 4) for _ in range(n)] for _ in range(n)]
        if not primitivity_check(A)[0]:
            continue
        found += 1
        eigs = eigen_decompose(A)
        assert sum(e.algebraic_multiplicity for e in eigs) == n
        for e in eigs:
            assert 1 <= e.max_jordan_block <= e.algebraic_multiplicity


def test_jordan_block_s5_ex2(rs_ex2):
    eigs = eigen_decompose(substitution_matrix(rs_ex2), lambda1=Fraction(9))
    three = next(e for e in eigs if e.value == 3)
    assert three.algebraic_multiplicity == 2
    assert three.max_jordan_block == 2
    assert three.chain_contributes
    # ... even though the proper eigenspace is orthogonal to all-ones
    assert three.eigenspace_in_one_perp


def test_one_perp_flags_s5_ex1_ex3(rs_ex1, rs_ex3):
    eigs = eigen_decompose(substitution_matrix(rs_ex1), lambda1=Fraction(9))
    four = next(e for e in eigs if e.value == 4)
    assert four.eigenspace_in_one_perp and not four.chain_contributes
    eigs = eigen_decompose(substitution_matrix(rs_ex3), lambda1=Fraction(9))
    five = next(e for e in eigs if e.value == 5)
    assert five.eigenspace_in_one_perp and not five.chain_contributes


def test_eigenvector_direction_s4():
    # kernel of (A - 4I) is spanned by (1, -2); <1, v> = -1 != 0
    A = [[6, 1], [4, 6]]
    ker = kernel_basis([[Fraction(A[i][j]) - (4 if i == j else 0) for j in range(2)] for i in range(2)])
    assert len(ker) == 1
    v = [x / ker[0][0] for x in ker[0]]
    assert v == [1, -2]
    assert sum(v) != 0
    four = next(e for e in eigen_decompose(A) if e.value == 4)
    assert not four.eigenspace_in_one_perp


def test_perron_data_s4():
    lam, v1, u1, alpha = perron_data([[6, 1], [4, 6]], (2, 1))
    assert (lam, v1, u1) == (8, [1, 2], [2, 1])
    assert alpha == Fraction(3, 4)


def test_perron_data_trivial_single_tile():
    lam, v1, u1, alpha = perron_data([[4]], (1,))
    assert lam == 4 and alpha == 1


def test_perron_data_rejects_bad_volumes():
    with pytest.raises(PerronMismatchError):
        perron_data([[6, 1], [4, 6]], (1, 1))


def test_alpha_definition_vs_density_limit(rs_ex1, rep_ex1):
    # independent oracle: point count / volume over level-m supertiles
    A = substitution_matrix(rs_ex1)
    u1 = rs_ex1.volumes()
    P = mat_pow(A, 8)
    for j in range(rs_ex1.n):
        col = [P[i][j] for i in range(rs_ex1.n)]
        density = Fraction(sum(col)) / dot(u1, col)
        assert abs(density - rep_ex1.alpha) < Fraction(1, 10**6)


def test_find_t_examples(rep_s4, rep_ex1):
    assert (rep_s4.t, rep_s4.lambda_t.value, rep_s4.k_t) == (2, 4, 1)
    # the 4-eigenspace lies in the all-ones orthocomplement, so t points at 1
    assert rep_ex1.t == 3 and rep_ex1.lambda_t.value == 1
    # single tile: no second eigenvalue
    rep = analyze_matrix([[4]], volumes=(1,))
    assert rep.t is None


def test_left_right_orthogonality_fixture_matrices(rep_s4, rep_ex1, rep_ex2, rep_ex3):
    # <u1, v> = 0 for every generalized eigenvector v of a non-dominant
    # eigenvalue; checked as u1 lying in the row space of (A - lam)^k
    for rep in (rep_s4, rep_ex1, rep_ex2, rep_ex3):
        A = rep.matrix
        n = rep.n
        for e in rep.eigenvalues[1:]:
            K = NumberField(e.minpoly)
            M = K.mat_sub_scalar([list(r) for r in A], K.generator())
            P = M
            for _ in range(e.max_jordan_block - 1):
                P = K.mat_mul(P, M)
            r = K.rank(P)
            assert K.rank(K.with_extra_row(P, [Fraction(x) for x in rep.u1])) == r


def test_sorted_order_is_permutation_invariant(rs_ex2):
    A = substitution_matrix(rs_ex2)
    n = len(A)
    rng = random.Random(3)
    base = eigen_decompose(A, lambda1=Fraction(9))
    base_data = [
        (tuple(e.minpoly), e.algebraic_multiplicity, e.max_jordan_block, e.eigenspace_in_one_perp, e.chain_contributes)
        for e in base
    ]
    for _ in range(4):
        perm = list(range(n))
        rng.shuffle(perm)
        PA = [[A[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
        eigs = eigen_decompose(PA, lambda1=Fraction(9))
        data = [
            (tuple(e.minpoly), e.algebraic_multiplicity, e.max_jordan_block, e.eigenspace_in_one_perp, e.chain_contributes)
            for e in eigs
        ]
        assert data == base_data


def test_interval_certification_distinct_magnitudes(rep_ex1, rep_ex3):
    width = Fraction(1, 10**12)
    for rep in (rep_ex1, rep_ex3):
        eigs = rep.eigenvalues
        for i in range(len(eigs)):
            for j in range(i + 1, len(eigs)):
                lo_i, hi_i = eigs[i].abs_bounds(width)
                lo_j, hi_j = eigs[j].abs_bounds(width)
                overlap = not (hi_i < lo_j or hi_j < lo_i)
                if overlap:
                    assert cmp_abs(eigs[i], eigs[j]) == 0


def test_equal_magnitude_class_and_tiebreak(rep_ex1):
    # |1| == |-1|: one magnitude class, positive real part first
    tail = rep_ex1.eigenvalues[-2:]
    assert [e.value for e in tail] == [1, -1]
    assert cmp_abs(tail[0], tail[1]) == 0


def test_plus_minus_root2_magnitude_tie():
    roots = isolate_real_roots([1, 0, -2])
    from subtiling.spectra import Eigenvalue

    e_neg = Eigenvalue(roots[0], 1, 1, False, False)
    e_pos = Eigenvalue(roots[1], 1, 1, False, False)
    assert cmp_abs(e_pos, e_neg) == 0


def test_irrational_spectrum_fibonacci():
    eigs = eigen_decompose([[1, 1], [1, 0]])
    assert [e.is_rational for e in eigs] == [False, False]
    assert eigs[0].minpoly == [1, -1, -1]
    lo, hi = eigs[0].abs_bounds(Fraction(1, 10**9))
    assert lo <= Fraction(161803398875, 10**11) <= hi


def test_complex_spectrum_sorted():
    # x^4 - x - 1: dominant real, then the complex conjugate pair, then real
    A = [[0, 0, 0, 1], [1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]]
    eigs = eigen_decompose(A)
    kinds = [(e.is_real, e.is_rational) for e in eigs]
    assert kinds == [(True, False), (False, False), (False, False), (True, False)]
    assert eigs[1].conjugate_partner is eigs[2]
    # descending magnitudes certified
    assert cmp_abs(eigs[0], eigs[1]) == 1
    assert cmp_abs(eigs[1], eigs[2]) == 0
    assert cmp_abs(eigs[2], eigs[3]) == 1


def test_non_primitive_rejected():
    with pytest.raises(NonPrimitiveError):
        eigen_decompose([[1, 0], [0, 1]])
    with pytest.raises(NonPrimitiveError):
        analyze_matrix([[0, 1], [1, 0]])


def test_perron_mismatch_rejected():
    with pytest.raises(PerronMismatchError):
        eigen_decompose([[6, 1], [4, 6]], lambda1=Fraction(9))


def test_find_t_uses_chain_not_eigenspace(rep_ex2):
    # with the eigenspace reading t would skip the defective eigenvalue and
    # land on 2 < sqrt(9), flipping the verdict; the chain reading keeps it
    assert rep_ex2.t == 2 and rep_ex2.k_t == 2 and rep_ex2.lambda_t.value == 3


def test_report_jsonable_rationals(rep_s4):
    from subtiling.spectra import report_to_jsonable

    doc = report_to_jsonable(rep_s4)
    assert doc["alpha"] == "3/4"
    assert doc["lambda1"] == "8"
    assert doc["eigenvalues"][0]["abs_lower"] == "8"
    assert doc["eigenvalues"][0]["abs_upper"] == "8"

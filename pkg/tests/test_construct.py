from fractions import Fraction

import numpy as np
import pytest

from nonassoc import (PreconditionError, builtin, cayley_dickson_double, complexify, conjugate,
                      find_unit, gen_algebra, involution, multiply, extract, unitize)
from nonassoc import scalars as sc
from nonassoc.construct import (cayley_dickson, cayley_dickson_with_involution, reals,
                                zero_algebra)

from _oracles import (GENERALIZED_ROWS, OCTONION_ROWS, nested_table, norms_from_generators,
                      printed_table)


def product_vector(A, i, j):
    return list(multiply(A, A.basis(i), A.basis(j)))


def expected_vector(entry, n):
    c, k = entry
    return [c if m == k else 0 for m in range(n)]


@pytest.mark.parametrize("name,n", [("complexes", 2), ("quaternions", 4), ("octonions", 8)])
def test_builtin_tables_match_printed_octonion_block(name, n):
    A = builtin(name)
    table = printed_table(OCTONION_ROWS)
    for i in range(n):
        for j in range(n):
            assert product_vector(A, i, j) == expected_vector(table[(i, j)], n), (i, j)


@pytest.mark.parametrize("n_p,n_q,n_r", [(2, 3, 5), (-2, 7, 11), (Fraction(1, 3), -5, 13),
                                         (1, 1, 1)])
def test_generalized_doubling_matches_symbolic_table(n_p, n_q, n_r):
    # distinct primes keep every product of norms distinguishable
    norms = norms_from_generators(n_p, n_q, n_r)
    A = gen_algebra([-Fraction(n_p), -Fraction(n_q), -Fraction(n_r)])
    table = printed_table(GENERALIZED_ROWS, norms)
    for i in range(8):
        for j in range(8):
            assert product_vector(A, i, j) == expected_vector(table[(i, j)], 8), (i, j)
    assert product_vector(A, 7, 7)[0] == -norms[1] * norms[2] * norms[4]


def test_tensor_agrees_with_recursive_pair_product():
    levels = [-2, 3, -1, 5]
    A = cayley_dickson(levels)
    for (i, j), v in nested_table(levels).items():
        assert product_vector(A, i, j) == v


def test_double_reals_gives_complexes():
    D, _ = cayley_dickson_double(reals(), None, -1)
    assert list(multiply(D, D.basis(1), D.basis(1))) == [-1, 0]


def test_double_quaternions_e4e5():
    O, _ = cayley_dickson_double(builtin("quaternions"), None, -1)
    assert product_vector(O, 4, 5) == [0, 1, 0, 0, 0, 0, 0, 0]
    assert product_vector(O, 5, 4) == [0, -1, 0, 0, 0, 0, 0, 0]
    assert product_vector(O, 1, 4) == [0, 0, 0, 0, 0, 1, 0, 0]


def test_generalized_e4_entries():
    g = Fraction(-7)
    A = gen_algebra([-1, -1, g])
    n4 = -g
    assert product_vector(A, 4, 4) == [-n4] + [0] * 7
    assert product_vector(A, 4, 5) == [0, n4] + [0] * 6


def test_gen_octonion_e7e1():
    A = builtin("genOctonion(-2,-3,-5)")
    assert product_vector(A, 7, 1) == [0, 0, 0, 0, 0, 0, -2, 0]


def test_builtin_quaternions_examples(H):
    assert product_vector(H, 1, 2) == [0, 0, 0, 1]
    assert product_vector(H, 2, 1) == [0, 0, 0, -1]
    assert product_vector(H, 3, 3) == [-1, 0, 0, 0]


def test_builtin_sedenions_dim(S):
    assert S.dim == 16


def test_zero_parameter_rejected():
    with pytest.raises(PreconditionError):
        gen_algebra([-1, 0])
    with pytest.raises(PreconditionError):
        cayley_dickson_double(reals(), None, 0)


def test_doubling_needs_unit():
    with pytest.raises(PreconditionError):
        cayley_dickson_double(zero_algebra(2), None, -1)


@pytest.mark.parametrize("levels", [[-1], [-1, -1], [-1, -1, -1], [-1, -1, -1, -1], [2, -3, 5]])
def test_nonunit_basis_anticommutes(levels):
    A = cayley_dickson(levels)
    for i in range(1, A.dim):
        for j in range(1, A.dim):
            if i != j:
                assert list(multiply(A, A.basis(i), A.basis(j))) == \
                    [-v for v in multiply(A, A.basis(j), A.basis(i))]


@pytest.mark.parametrize("levels", [[-1, -1], [-1, -1, -1], [3, -2, -1, 5]])
def test_induced_involution_equals_quadratic_involution(levels):
    A, S = cayley_dickson_with_involution(levels)
    Q = extract(A)
    for j in range(A.dim):
        assert list(S[:, j]) == list(involution(Q, A.basis(j)))


@pytest.mark.parametrize("name", ["complexes", "quaternions", "octonions"])
def test_complexify_commutes_with_building_over_complex_scalars(name):
    direct = builtin(name, sc.COMPLEX_RATIONAL)
    assert complexify(builtin(name)).same_table(direct)


def test_complexify_reals_is_one_dimensional():
    C = complexify(reals())
    assert C.dim == 1 and C.mode == sc.COMPLEX_RATIONAL


def test_complexified_quaternions_singular_exactly_at_plus_minus_i(H):
    from nonassoc import linalg as la
    from nonassoc import mult_operator
    HC = complexify(H)
    i = sc.ComplexRational(0, 1)
    for z, singular in [(i, True), (-i, True), (sc.ComplexRational(1), False),
                        (sc.ComplexRational(0, 2), False)]:
        a = z * HC.one() - HC.basis(1)
        d = la.det(mult_operator(HC, a), HC.mode)
        assert (d == 0) == singular


def test_conjugation_is_multiplicative(O):
    OC = complexify(O)
    rng = np.random.default_rng(3)
    for _ in range(10):
        x = OC.element([sc.ComplexRational(int(a), int(b)) for a, b in rng.integers(-3, 4, (8, 2))])
        y = OC.element([sc.ComplexRational(int(a), int(b)) for a, b in rng.integers(-3, 4, (8, 2))])
        lhs = conjugate(multiply(OC, x, y))
        rhs = multiply(OC, conjugate(x), conjugate(y))
        assert OC.close(lhs, rhs)


def test_unitize_zero_algebra_is_dual_numbers():
    D = unitize(zero_algebra(1))
    assert D.dim == 2
    assert list(find_unit(D)) == [1, 0]
    assert list(multiply(D, D.basis(1), D.basis(1))) == [0, 0]


def test_unitize_embeds_products(H):
    U = unitize(H)
    assert list(find_unit(U)) == [1, 0, 0, 0, 0]
    for i in range(4):
        for j in range(4):
            assert list(multiply(U, U.basis(i + 1), U.basis(j + 1)))[1:] == product_vector(H, i, j)
            assert multiply(U, U.basis(i + 1), U.basis(j + 1))[0] == 0


def test_unitize_preserves_alternativity(O):
    from nonassoc import check_linearized_identity
    U = unitize(O)
    assert check_linearized_identity(U, "left-alternative").holds
    assert check_linearized_identity(U, "right-alternative").holds

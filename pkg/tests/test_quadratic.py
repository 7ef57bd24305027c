from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from nonassoc import (DependentVectorsError, IsotropicVectorError, PreconditionError, builtin,
                      change_of_basis, check_linearized_identity, commutative_division_probe,
                      extract, form_property_checks, gram_schmidt, involution, mult_operator,
                      multiply, natural_norm, riesz_and_adjoint, zero_divisor_kernels)
from nonassoc import linalg as la
from nonassoc import scalars as sc
from nonassoc.construct import (cayley_dickson, direct_sum, strictly_upper_triangular, unitize,
                                zero_algebra)
from nonassoc.quadratic import (adjoint_defect, check_composition, check_locally_field_extension,
                                check_proper, composition_defect, extract_with_witness,
                                power_norm_holds, proper_defect)

from _oracles import has_primitive_zero_mod, small_isotropic_vector
from corpus import non_flexible_dim3, quadratic_corpus, random_invertible

frac = st.fractions(min_value=-4, max_value=4, max_denominator=5)


def vec(A, values):
    return A.element([Fraction(v) for v in values])


# ------------------------------------------------------------------ extraction

def test_extract_quaternion_example(H):
    Q = extract(H)
    a = vec(H, [2, 3, 0, 0])
    # oracle: sympy solves a^2 = alpha a + beta 1 independently
    sq = multiply(H, a, a)
    alpha, beta = sympy.symbols("alpha beta")
    sol = sympy.solve([sympy.Rational(str(sq[k])) - alpha * int(a[k]) - beta * (1 if k == 0 else 0)
                       for k in range(4)], [alpha, beta])
    assert Q.trace_of(a) == Fraction(str(sol[alpha])) / 2 == 2
    assert Q.norm(a) == -Fraction(str(sol[beta])) == 13


@given(frac)
def test_extract_scalar_multiple(t):
    O = builtin("octonions")
    Q = extract(O)
    a = t * O.one()
    assert Q.trace_of(a) == t and Q.norm(a) == t * t


def test_extract_rejects_nilpotent_unitization():
    U = unitize(strictly_upper_triangular(3))
    Q, w = extract_with_witness(U)
    assert Q is None
    span = np.array([U.one(), w, multiply(U, w, w)], dtype=object)
    assert la.rank(span, sc.RATIONAL) == 3


def test_extract_needs_unit():
    with pytest.raises(PreconditionError):
        extract(strictly_upper_triangular(3))


@pytest.mark.parametrize("entry", quadratic_corpus(), ids=lambda e: e[0])
def test_structure_invariants(entry):
    _, A = entry
    Q = extract(A)
    assert Q is not None
    G = Q.gram
    assert (G == G.T).all()
    assert Q.norm(Q.unit) == 1
    n = A.dim
    elems = [A.basis(i) for i in range(n)] + [A.basis(i) + A.basis(j)
                                             for i in range(n) for j in range(i + 1, n)]
    for a in elems:
        defect = multiply(A, a, a) - 2 * Q.trace_of(a) * a + Q.norm(a) * Q.unit
        assert A.is_zero(defect)
    for i in range(n):
        for j in range(n):
            a, b = A.basis(i), A.basis(j)
            sym = multiply(A, a, b) + multiply(A, b, a)
            assert Q.form(a, b) == 2 * Q.trace_of(a) * Q.trace_of(b) - Q.trace_of(sym) / 2


# ------------------------------------------------------------------ involution

def test_involution_examples(H):
    Q = extract(H)
    assert list(involution(Q, H.basis(1))) == [0, -1, 0, 0]
    assert list(involution(Q, H.one())) == [1, 0, 0, 0]
    assert list(involution(Q, vec(H, [2, 3, 0, 0]))) == [2, -3, 0, 0]


@given(st.lists(frac, min_size=8, max_size=8))
def test_involution_laws(values):
    O = builtin("octonions")
    Q = extract(O)
    a = vec(O, values)
    s = involution(Q, a)
    assert list(involution(Q, s)) == list(a)
    assert list(multiply(O, a, s)) == list(Q.norm(a) * Q.unit)
    assert list(multiply(O, s, a)) == list(Q.norm(a) * Q.unit)


@pytest.mark.parametrize("entry", quadratic_corpus(), ids=lambda e: e[0])
def test_trace_identities_and_antihomomorphism(entry):
    _, A = entry
    Q = extract(A)
    flexible = check_linearized_identity(A, "flexible").holds
    n = A.dim
    for i in range(n):
        a = A.basis(i)
        for j in range(n):
            b = A.basis(j)
            ab, ba = multiply(A, a, b), multiply(A, b, a)
            t = Q.trace_of(ab)
            assert t == Q.trace_of(ba) == Q.form(a, involution(Q, b)) == Q.form(involution(Q, a), b)
            lin = 2 * Q.trace_of(b) * a + 2 * Q.trace_of(a) * b - 2 * Q.form(a, b) * Q.unit
            assert A.is_zero(ab + ba - lin)
            if flexible:
                lhs = involution(Q, ab)
                rhs = multiply(A, involution(Q, b), involution(Q, a))
                assert A.is_zero(lhs - rhs)


# ------------------------------------------------------------------ flags

def test_flags_octonions(O):
    f = form_property_checks(extract(O))
    assert f.proper.holds and f.composition.holds and f.locally_field_extension.holds
    assert f.positive_definite.holds


def test_flags_sedenions(S):
    Q = extract(S)
    f = form_property_checks(Q)
    assert f.proper.holds and f.locally_field_extension.holds
    assert not f.composition.holds
    a, b = f.composition.witness
    assert composition_defect(Q, a, b) != 0


def test_flags_non_flexible_dim3():
    A = non_flexible_dim3()
    Q = extract(A)
    c = check_proper(Q)
    assert not c.holds
    a, b = c.witness
    assert proper_defect(Q, a, b) != 0


@pytest.mark.parametrize("levels,holds", [([-1], True), ([-1, -1], True), ([-1, -1, -1], True),
                                          ([-1, -1, -1, -1], False), ([], True)])
def test_composition_ladder(levels, holds):
    Q = extract(cayley_dickson(levels))
    assert check_composition(Q).holds is holds


# n(e1) = -g1, n(e2) = -g2, n(e1 e2) = g1 g2
ISOTROPY = [
    ((-1, -1), True, None), ((1, -1), False, None), ((-1, 5), False, None), ((2, -7), False, None),
    ((-1, 3), True, 3), ((2, 3), True, 3), ((3, 5), True, 3), ((-1, 7), True, 7),
    ((-2, -5), True, None),
]


@pytest.mark.parametrize("levels,anisotropic,prime", ISOTROPY)
def test_locally_field_extension_against_independent_oracles(levels, anisotropic, prime):
    A = cayley_dickson(list(levels))
    Q = extract(A)
    c = check_locally_field_extension(Q)
    g1, g2 = levels
    diag = (1, -g1, -g2, g1 * g2)
    assert c.holds is anisotropic
    if anisotropic:
        assert small_isotropic_vector(diag, 4) is None
        if prime is not None:
            assert not has_primitive_zero_mod(diag, prime, 2)
    else:
        assert small_isotropic_vector(diag, 4) is not None
        a, b = c.witness
        assert A.is_zero(multiply(A, a, b)) and A.is_zero(multiply(A, b, a)) and not A.is_zero(a)


def test_real_mode_field_extension_is_positive_definiteness():
    from nonassoc.construct import to_real
    assert check_locally_field_extension(extract(to_real(builtin("octonions")))).holds
    assert not check_locally_field_extension(extract(to_real(cayley_dickson([-1, 3])))).holds


# ------------------------------------------------------------------ Gram-Schmidt, Riesz, adjoint

def test_gram_schmidt_examples(H):
    Q = extract(H)
    half = Fraction(1, 2)
    out = gram_schmidt(Q, [vec(H, [1, 1, 0, 0]), H.basis(1)])
    assert [list(v) for v in out] == [[1, 1, 0, 0], [-half, half, 0, 0]]
    ortho = [H.basis(0), H.basis(2), H.basis(3)]
    assert [list(v) for v in gram_schmidt(Q, ortho)] == [list(v) for v in ortho]
    with pytest.raises(DependentVectorsError):
        gram_schmidt(Q, [H.one(), H.basis(1), vec(H, [1, 1, 0, 0])])


def test_gram_schmidt_isotropic_step():
    A = cayley_dickson([1, 1])
    Q = extract(A)
    with pytest.raises(IsotropicVectorError) as exc:
        gram_schmidt(Q, [A.basis(2), vec(A, [1, 1, 0, 0])])
    assert exc.value.index == 1


def test_gram_schmidt_normalizes_in_real_mode():
    from nonassoc.construct import to_real
    A = to_real(builtin("quaternions"))
    Q = extract(A)
    out = gram_schmidt(Q, [np.array([1.0, 1, 0, 0]), np.array([0.0, 1, 2, 0])], True)
    for i, b in enumerate(out):
        for j, c in enumerate(out):
            assert abs(Q.form(b, c) - (1.0 if i == j else 0.0)) < 1e-12


@given(st.lists(st.lists(st.integers(-3, 3), min_size=8, max_size=8), min_size=1, max_size=5))
def test_gram_schmidt_orthogonal_and_prefix_spans(rows):
    O = builtin("octonions")
    Q = extract(O)
    vs = [vec(O, r) for r in rows]
    if la.rank(np.array(vs, dtype=object), sc.RATIONAL) < len(vs):
        with pytest.raises(DependentVectorsError) as exc:
            gram_schmidt(Q, vs)
        rel = exc.value.relation
        assert O.is_zero(sum((c * v for c, v in zip(rel, vs)), O.zero()))
        return
    out = gram_schmidt(Q, vs)
    for i in range(len(out)):
        for j in range(i):
            assert Q.form(out[i], out[j]) == 0
    for k in range(1, len(vs) + 1):
        a = np.array(vs[:k], dtype=object)
        b = np.array(out[:k], dtype=object)
        r = la.rank(a, sc.RATIONAL)
        assert r == la.rank(b, sc.RATIONAL) == la.rank(np.concatenate([a, b]), sc.RATIONAL)


def test_riesz_and_adjoint_examples(H):
    Q = extract(H)
    r, _ = riesz_and_adjoint(Q, functional=Q.trace)
    assert list(r) == [1, 0, 0, 0]
    _, adj = riesz_and_adjoint(Q, T=mult_operator(H, H.basis(1)))
    assert (adj == mult_operator(H, -H.basis(1))).all()
    eye = sc.identity(4, sc.RATIONAL)
    _, adj = riesz_and_adjoint(Q, T=eye)
    assert (adj == eye).all()


def test_adjoint_of_multiplication_is_multiplication_by_conjugate(O):
    Q = extract(O)
    a = vec(O, [1, 2, -1, 3, 0, 5, -2, 1])
    s = involution(Q, a)
    for side in ("left", "right"):
        _, adj = riesz_and_adjoint(Q, T=mult_operator(O, a, side))
        assert (adj == mult_operator(O, s, side)).all()
        assert not np.any(adjoint_defect(Q, mult_operator(O, a, side), adj))


def test_riesz_needs_nondegenerate_form():
    # dual numbers: eps^2 = 0, so <eps, eps> = 0 and the form is degenerate
    A = unitize(zero_algebra(1))
    Q = extract(A)
    assert Q.norm(A.basis(1)) == 0
    with pytest.raises(PreconditionError):
        riesz_and_adjoint(Q, functional=Q.trace)


# ------------------------------------------------------------------ natural norm

def test_natural_norm_examples(H, S):
    Q = extract(H)
    assert natural_norm(Q, vec(H, [2, 3, 0, 0])) == (13, None)
    assert natural_norm(Q, H.one())[0] == 1
    QS = extract(S)
    a = vec(S, np.random.default_rng(4).integers(-3, 4, 16))
    assert power_norm_holds(QS, a, 5)


def test_natural_norm_real_mode():
    from nonassoc.construct import to_real
    A = to_real(builtin("octonions"))
    sq, nrm = natural_norm(extract(A), np.array([1.0, 2, 0, 0, 0, 0, 0, 2]))
    assert sq == pytest.approx(9.0) and nrm == pytest.approx(3.0)


def test_natural_norm_rejects_indefinite_form():
    A = cayley_dickson([1, -1])
    with pytest.raises(PreconditionError):
        natural_norm(extract(A), A.one())


# ------------------------------------------------------------------ uniqueness and the dimension bound

@pytest.mark.parametrize("entry", quadratic_corpus()[:13], ids=lambda e: e[0])
def test_form_is_basis_independent(entry):
    _, A = entry
    P = random_invertible(A.dim, 99)
    B = change_of_basis(A, P)
    GA, GB = extract(A).gram, extract(B).gram
    assert (P.T.dot(GA).dot(P) == GB).all()


def commutative_quadratic_algebras():
    return [("reals", builtin("reals")), ("complexes", builtin("complexes")),
            ("cd(2)", cayley_dickson([2])), ("cd(-3)", cayley_dickson([-3])),
            ("C+C", direct_sum(builtin("complexes"), builtin("complexes")))]


@pytest.mark.parametrize("entry", list(quadratic_corpus()) + commutative_quadratic_algebras(),
                         ids=lambda e: e[0])
def test_commutative_without_zero_divisors_has_dim_at_most_two(entry):
    _, A = entry
    Q = extract(A)
    if Q is None or not check_linearized_identity(A, "commutative").holds:
        return
    tested = [A.basis(i) for i in range(A.dim)] + \
        [A.basis(i) + s * A.basis(j) for i in range(A.dim) for j in range(i + 1, A.dim)
         for s in (1, -1)]
    if all(not zero_divisor_kernels(A, a)[2] for a in tested) and \
            check_locally_field_extension(Q).holds:
        assert A.dim <= 2
    assert commutative_division_probe(A).status in ("DimAtMostTwoConfirmed",
                                                    "CounterexampleToHypotheses")

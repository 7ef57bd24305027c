from fractions import Fraction

import numpy as np
import pytest

from nonassoc import (builtin, change_of_basis, check_linearized_identity, extract, multiply,
                      verify_isomorphism)
from nonassoc import linalg as la
from nonassoc import scalars as sc
from nonassoc.classify import (DIVISION_VERDICTS, classify, commutative_division_probe,
                               extend_generator_chain, product_basis)
from nonassoc.construct import (cayley_dickson, complexify, direct_sum, strictly_upper_triangular,
                                to_real, unitize, with_flipped_sign)
from nonassoc.errors import IsotropicVectorError

from corpus import non_flexible_dim3, random_invertible, scrambled


def vec(A, values):
    return A.element([Fraction(v) for v in values])


# ------------------------------------------------------------------ verdicts

@pytest.mark.parametrize("name,verdict,family", [
    ("reals", "RealField", "RealField"),
    ("complexes", "GeneralizedQuadratic", "ComplexField"),
    ("quaternions", "GeneralizedQuaternion", "Quaternion"),
    ("octonions", "GeneralizedOctonion", "Octonion"),
])
def test_builtins_exact(name, verdict, family):
    out = classify(builtin(name))
    assert (out.verdict, out.family) == (verdict, family)
    assert all(p == -1 for p in out.params)
    assert verify_isomorphism(out.target, builtin(name), out.iso).holds


@pytest.mark.parametrize("name,verdict", [("reals", "RealField"), ("complexes", "ComplexField"),
                                          ("quaternions", "Quaternion"),
                                          ("octonions", "Octonion")])
def test_builtins_real_mode(name, verdict):
    A = builtin(name, sc.REAL)
    out = classify(A)
    assert out.verdict == out.family == verdict
    assert verify_isomorphism(out.target, A, out.iso).holds


def test_gen_quaternion_hamilton_parameters():
    out = classify(builtin("genQuaternion(-1,-1)"))
    assert out.verdict == "GeneralizedQuaternion" and out.params == [-1, -1]


@pytest.mark.parametrize("levels,family", [([-2, -3], "Quaternion"), ([3, 5], "SplitQuaternion"),
                                           ([-1, 3], "SplitQuaternion"),
                                           ([-2, -3, -5], "Octonion")])
def test_generalized_division_algebras(levels, family):
    A = cayley_dickson(levels)
    out = classify(A)
    assert out.is_division and out.family == family
    assert verify_isomorphism(out.target, A, out.iso).holds


@pytest.mark.parametrize("levels", [[1, 1], [-1, 2], [-1, -1, 3], [1]])
def test_isotropic_norm_gives_joint_zero_divisor(levels):
    A = cayley_dickson(levels)
    out = classify(A)
    assert out.verdict == "HasJointZeroDivisor"
    a, b = out.witness
    assert not A.is_zero(a) and not A.is_zero(b)
    assert A.is_zero(multiply(A, a, b)) and A.is_zero(multiply(A, b, a))


def test_failure_verdicts(S):
    assert classify(strictly_upper_triangular(3)).verdict == "NotUnital"
    out = classify(unitize(strictly_upper_triangular(3)))
    assert out.verdict == "NotQuadratic" and len(out.witness) == 1
    out = classify(S)
    assert out.verdict == "NotAlternative" and out.witness
    assert classify(non_flexible_dim3()).verdict == "NotAlternative"


def test_complexified_algebras():
    out = classify(complexify(builtin("reals")))
    assert out.verdict == "ComplexField"
    out = classify(complexify(builtin("quaternions")))
    assert out.verdict == "HasJointZeroDivisor"
    A = complexify(builtin("quaternions"))
    a, b = out.witness
    assert A.is_zero(multiply(A, a, b)) and A.is_zero(multiply(A, b, a))


@pytest.mark.parametrize("name", ["complexes", "quaternions", "octonions"])
def test_scrambled_round_trip_exact(name):
    X = builtin(name)
    expected = classify(X).family
    for seed in range(3):
        A = scrambled(X, seed)
        out = classify(A)
        assert out.family == expected
        assert verify_isomorphism(out.target, A, out.iso).holds


def test_scrambled_round_trip_real_mode():
    X = builtin("octonions")
    P = random_invertible(8, 21)
    A = to_real(change_of_basis(X, P))
    out = classify(A)
    assert out.verdict == "Octonion"
    assert verify_isomorphism(out.target, A, out.iso).holds


def test_no_octonion_verdict_for_associative_inputs():
    for A in (builtin("quaternions"), cayley_dickson([3, 5]), scrambled(builtin("quaternions"), 8),
              cayley_dickson([-2, -7])):
        assert check_linearized_identity(A, "associative").holds
        out = classify(A)
        assert out.is_division and out.verdict not in ("Octonion", "GeneralizedOctonion")
        assert out.dim in (1, 2, 4, 8)


# ------------------------------------------------------------------ generator chain

def test_extend_chain_inside_octonions(O):
    Q = extract(O)
    g = extend_generator_chain(O, Q, [O.basis(1), O.basis(2)], candidate=O.basis(4) + O.basis(1))
    assert list(g) == list(O.basis(4))


def test_extend_chain_trivial_case(H):
    Q = extract(H)
    g = extend_generator_chain(H, Q, [H.basis(1)], candidate=H.basis(2))
    assert list(g) == list(H.basis(2))


def test_extend_chain_complete_returns_none(H):
    Q = extract(H)
    assert extend_generator_chain(H, Q, [H.basis(1), H.basis(2)]) is None


def test_extend_chain_isotropic():
    # n(e2) = 1, n(e3) = -1, so the residual e2 + e3 has norm zero
    A = cayley_dickson([1, -1])
    Q = extract(A)
    with pytest.raises(IsotropicVectorError):
        extend_generator_chain(A, Q, [A.basis(1)], candidate=A.basis(2) + A.basis(3) + A.basis(0))


def test_extend_chain_generators_anticommute(O):
    Q = extract(O)
    A = scrambled(O, 12)
    QA = extract(A)
    gens = []
    while True:
        g = extend_generator_chain(A, QA, gens)
        if g is None:
            break
        assert QA.trace_of(g) == 0
        for h in gens:
            assert A.is_zero(multiply(A, g, h) + multiply(A, h, g))
        gens.append(g)
    assert len(product_basis(A, QA.unit, gens)) == 8


def test_sedenion_chain_past_dimension_eight(S):
    """The chain grows past 8 and the (pq)(rs) pair is recorded; it does not vanish here.

    The vanishing of (pq)(rs) relies on alternativity, which the sedenions lack,
    so the classifier stops at NotAlternative before reaching this step.
    """
    Q = extract(S)
    gens = [S.basis(1), S.basis(2), S.basis(4)]
    s = extend_generator_chain(S, Q, gens)
    assert s is not None and Q.trace_of(s) == 0
    for g in gens:
        assert S.is_zero(multiply(S, s, g) + multiply(S, g, s))
    pq = multiply(S, gens[0], gens[1])
    rs = multiply(S, gens[2], s)
    assert not S.is_zero(multiply(S, pq, rs))


# ------------------------------------------------------------------ isomorphism checks

def test_verify_identity_and_broken(H):
    I = sc.identity(4, sc.RATIONAL)
    assert verify_isomorphism(H, H, I).holds
    broken = with_flipped_sign(H, 1, 2)
    c = verify_isomorphism(H, broken, I)
    assert not c.holds and c.extra["pair"] == (1, 2)


def test_quaternion_conjugation_automorphism():
    H = builtin("quaternions", sc.REAL)
    rng = np.random.default_rng(17)
    u = rng.standard_normal(4)
    u /= np.linalg.norm(u)
    Q = extract(H)
    ubar = 2 * Q.trace_of(u) * H.one() - u
    M = np.array([multiply(H, multiply(H, u, H.basis(j)), ubar) for j in range(4)]).T
    assert verify_isomorphism(H, H, M).holds


def test_verify_rejects_singular_map(H):
    assert not verify_isomorphism(H, H, sc.zeros((4, 4), sc.RATIONAL)).holds


def test_natural_norm_isometry_real_mode():
    A = to_real(scrambled(builtin("octonions"), 31))
    out = classify(A)
    QA = extract(A)
    # column j of iso is the image of the j-th orthonormal target basis vector
    for j in range(8):
        assert abs(QA.norm(out.iso[:, j]) - 1.0) < 1e-9
    G = out.iso.T.dot(QA.gram).dot(out.iso)
    assert np.max(np.abs(G - np.eye(8))) < 1e-9


# ------------------------------------------------------------------ commutative probe

def test_commutative_probe_examples(H):
    assert commutative_division_probe(builtin("complexes", sc.REAL)).status == "DimAtMostTwoConfirmed"
    out = commutative_division_probe(H)
    assert (out.status, out.hypothesis) == ("CounterexampleToHypotheses", "commutative")
    CC = direct_sum(builtin("complexes"), builtin("complexes"))
    out = commutative_division_probe(CC)
    assert (out.status, out.hypothesis) == ("CounterexampleToHypotheses", "no zero divisors")
    a, b = out.witness
    assert CC.is_zero(multiply(CC, a, b)) or CC.is_zero(multiply(CC, b, a))


def test_one_dimensional_criterion_over_complex_scalars():
    # every basis element generates a one-dimensional subalgebra and none squares to zero
    A = complexify(builtin("reals"))
    from nonassoc import subalgebra_closure
    for i in range(A.dim):
        basis, _ = subalgebra_closure(A, [A.basis(i)], adjoin_unit=True)
        assert len(basis) == 1
        assert not A.is_zero(multiply(A, A.basis(i), A.basis(i)))
    assert classify(A).dim == 1


def test_division_verdict_dimensions():
    algebras = [builtin(n) for n in ("reals", "complexes", "quaternions", "octonions", "sedenions")]
    algebras += [cayley_dickson(l) for l in ([2], [-5], [1, -1], [-1, -3], [-1, -1, 3])]
    for A in algebras:
        out = classify(A)
        if out.verdict in DIVISION_VERDICTS:
            assert out.dim in (1, 2, 4, 8)
        assert la.rank(out.iso, A.mode) == A.dim if out.iso is not None else True

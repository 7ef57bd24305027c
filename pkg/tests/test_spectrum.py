from fractions import Fraction

import numpy as np
import pytest

from nonassoc import (PreconditionError, builtin, extract, multiply, one_sided_spectrum,
                      open_question_probe, spectrum_complex, spectrum_real)
from nonassoc import scalars as sc
from nonassoc.construct import complexify, strictly_upper_triangular, to_real
from nonassoc.spectrum import approx_equal_multisets, closed_form_roots, roots_numeric

I = sc.ComplexRational(0, 1)


def close_roots(res, expected, tol=1e-9):
    got = sorted(((complex(z), m) for z, m in res.roots), key=lambda t: (t[0].real, t[0].imag))
    want = sorted(((complex(z), m) for z, m in expected), key=lambda t: (t[0].real, t[0].imag))
    return len(got) == len(want) and all(abs(a - b) <= tol and m == k
                                         for (a, m), (b, k) in zip(got, want))


def test_complexified_complex_i():
    C = complexify(builtin("complexes"))
    res = spectrum_complex(C, C.element([I, 0]))
    assert res.mode == "ExactCharPoly"
    assert close_roots(res, [(1j, 2)])
    # i times e1 squares to +1
    assert close_roots(spectrum_complex(C, C.element([0, I])), [(1, 1), (-1, 1)])


def test_scalar_element():
    O = complexify(builtin("octonions"))
    res = spectrum_complex(O, O.element([sc.ComplexRational(Fraction(3, 2))] + [0] * 7))
    assert close_roots(res, [(1.5, 8)])


def test_complexified_quaternion_e1():
    HC = complexify(builtin("quaternions"))
    res = spectrum_complex(HC, HC.basis(1))
    assert close_roots(res, [(1j, 2), (-1j, 2)])


def test_real_spectrum_examples(H, O):
    res = spectrum_real(H, H.element([2, 3, 0, 0]))
    assert close_roots(res, [(2 + 3j, 2), (2 - 3j, 2)])
    assert close_roots(spectrum_real(builtin("reals"), [5]), [(5, 1)])
    res = spectrum_real(O, O.basis(7))
    assert close_roots(res, [(1j, 4), (-1j, 4)])
    assert sorted(res.closed_form, key=lambda z: z.imag) == [-1j, 1j]


def test_exact_charpoly_is_rational_monic(O):
    a = O.element([1, -2, 0, 3, 1, 0, 0, 2])
    res = spectrum_real(O, a)
    assert len(res.charpoly) == 9 and res.charpoly[0] == 1
    assert all(isinstance(c, Fraction) for c in res.charpoly)


def test_preconditions(S):
    with pytest.raises(PreconditionError):
        spectrum_complex(S, S.basis(1))
    with pytest.raises(PreconditionError):
        spectrum_real(S, S.basis(1))
    with pytest.raises(PreconditionError):
        one_sided_spectrum(strictly_upper_triangular(3), [1, 0, 0])


def test_one_sided_on_sedenion_zero_divisor():
    SC = complexify(builtin("sedenions"))
    a = SC.basis(1) + SC.basis(10)
    for side in ("left", "right"):
        res = one_sided_spectrum(SC, a, side)
        assert res.side == ("LeftOnly" if side == "left" else "RightOnly")
        assert any(abs(z) < 1e-12 for z in res.distinct())


def test_one_sided_equals_two_sided_on_alternative(O):
    a = O.element([1, 2, 0, -1, 0, 3, 0, 1])
    two = spectrum_complex(O, a)
    for side in ("left", "right"):
        assert one_sided_spectrum(O, a, side).roots == two.roots
    assert close_roots(one_sided_spectrum(O, O.one(), "left"), [(1, 8)])
    assert close_roots(one_sided_spectrum(O, O.one(), "right"), [(1, 8)])


def test_numeric_path_matches_closed_form():
    O = to_real(builtin("octonions"))
    Q = extract(O)
    rng = np.random.default_rng(8)
    for _ in range(10):
        a = rng.standard_normal(8)
        res = spectrum_real(O, a)
        assert res.mode == "NumericRoots"
        assert approx_equal_multisets(res.values(), closed_form_roots(Q, a) * 4, 1e-8)


def test_numeric_spectrum_complex_mode():
    HC = complexify(to_real(builtin("quaternions")))
    res = spectrum_complex(HC, np.array([0, 1, 0, 0], dtype=complex))
    assert close_roots(res, [(1j, 2), (-1j, 2)], 1e-8)


def test_roots_numeric_clusters_multiplicities():
    roots = [2.0, 2.0, 2.0, -1.0, 0.5j, -0.5j]
    res = roots_numeric(np.poly(roots), 1e-9)
    assert sorted(m for _, m in res) == [1, 1, 1, 3]


def test_spectral_mapping_on_quadratic_closed_form(O):
    Q = extract(O)
    rng = np.random.default_rng(9)
    for _ in range(10):
        a = O.element([O.scalar(int(v)) for v in rng.integers(-4, 5, 8)])
        lam = closed_form_roots(Q, a)
        sq = closed_form_roots(Q, multiply(O, a, a))
        assert approx_equal_multisets([z * z for z in lam], sq, 1e-9)


def test_open_question_probe_is_only_a_record(O):
    recs = open_question_probe(O, samples=3, seed=1)
    assert len(recs) == 3 and all("agree" in r for r in recs)


def test_nonempty_and_conjugation_closed(S):
    SC = complexify(S)
    rng = np.random.default_rng(12)
    for _ in range(3):
        a = S.element([S.scalar(int(v)) for v in rng.integers(-3, 4, 16)])
        res = one_sided_spectrum(S, a, "left")
        assert sum(m for _, m in res.roots) == 16
        vals = res.distinct()
        for z in vals:
            assert min(abs(z.conjugate() - w) for w in vals) < 1e-8
        assert one_sided_spectrum(SC, SC.element(list(a)), "left").roots

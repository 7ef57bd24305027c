"""Bilinear form of a quadratic algebra and the checks built on it.

A unital algebra is quadratic when every element satisfies
``a^2 - 2 p(a) a + n(a) 1 = 0`` for a linear ``p`` and a quadratic ``n``.
Both are read off the basis, the polarized identity is verified on basis
pairs, and the symmetric form is

    <a, b> = 2 p(a) p(b) - p(ab + ba) / 2,

so that ``<a, 1> = p(a)`` and ``<a, a> = n(a)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg as la
from . import scalars as sc
from .core import Algebra, coerce, find_unit, multiply, power_left_normed
from .errors import (DependentVectorsError, IsotropicVectorError, PreconditionError,
                     SingularMatrixError, VerificationError)
from .results import Check


@dataclass(frozen=True, eq=False)
class QuadraticStructure:
    algebra: Algebra
    trace: np.ndarray      # p(a) = trace . a
    gram: np.ndarray       # gram[i, j] = <e_i, e_j>
    unit: np.ndarray

    @property
    def mode(self) -> str:
        return self.algebra.mode

    def trace_of(self, a):
        return _dot(self.trace, coerce(self.algebra, a))

    def form(self, a, b):
        a = coerce(self.algebra, a)
        b = coerce(self.algebra, b)
        return _dot(a, self.gram.dot(b))

    def norm(self, a):
        return self.form(a, a)

    def discriminant(self, a):
        p = self.trace_of(a)
        return p * p - self.norm(a)

    def min_poly(self, a):
        """``[n(a), -2 p(a), 1]``: ascending coefficients of ``z^2 - 2p z + n``."""
        return [self.norm(a), -2 * self.trace_of(a), sc.one(self.mode)]


def _dot(x, y):
    if x.dtype == object or y.dtype == object:
        acc = 0
        for u, v in zip(x, y):
            if u != 0 and v != 0:
                acc = acc + u * v
        return acc
    return x.dot(y)


def _zero_mask(A: Algebra, arr, scale: float = 1.0):
    """Entrywise zero test (exact, or tolerance in floating modes)."""
    arr = np.asarray(arr)
    if arr.dtype == object:
        return ~np.vectorize(bool, otypes=[bool])(arr) if arr.size else np.ones(arr.shape, bool)
    tol = sc.default_tol() if A.tol is None else A.tol
    return np.abs(arr) <= tol * max(scale, 1.0)


# ------------------------------------------------------------------ extraction

def _square_coefficients(A: Algebra, u, e):
    """``(p, n)`` with ``e^2 = 2p e - n 1``, or None when ``e^2`` leaves span{1, e}."""
    mode = A.mode
    cols = np.array([e, u], dtype=e.dtype).T
    if la.rank(cols, mode, A.tol) < 2:
        coef = la.solve(u.reshape(-1, 1), e, mode, A.tol)
        t = coef[0]
        return t, t * t
    sq = multiply(A, e, e)
    sol = la.solve(cols, sq, mode, A.tol)
    if sol is None:
        return None
    alpha, beta = sol
    if not A.close(alpha * e + beta * u, sq):
        return None
    return alpha * sc.to_scalar(Fraction(1, 2), mode) if A.exact else alpha / 2, -beta


def extract_with_witness(A: Algebra):
    """``(QuadraticStructure, None)`` or ``(None, witness)``.

    The witness is an element whose square is not in ``span{1, a}``.
    """
    u = find_unit(A)
    if u is None:
        raise PreconditionError("quadratic structure needs a unital algebra")
    n = A.dim
    mode = A.mode
    trace = sc.zeros(n, mode)
    for i in range(n):
        pn = _square_coefficients(A, u, A.basis(i))
        if pn is None:
            return None, A.basis(i)
        trace[i] = pn[0]
    T = A.table
    half = sc.to_scalar(Fraction(1, 2), mode) if A.exact else 0.5
    S = T + T.transpose(1, 0, 2)                      # e_i e_j + e_j e_i
    tS = np.tensordot(S, trace, axes=(2, 0))           # p(e_i e_j + e_j e_i)
    gram = 2 * np.multiply.outer(trace, trace) - half * tS
    if A.exact:
        gram = sc.array(gram, mode)
        trace = sc.array(trace, mode)
    # polarized defect: e_i e_j + e_j e_i - 2 p_i e_j - 2 p_j e_i + 2 <e_i, e_j> 1
    eye = sc.identity(n, mode)
    D = (S - 2 * trace[:, None, None] * eye[None, :, :] - 2 * trace[None, :, None] * eye[:, None, :]
         + 2 * gram[:, :, None] * u[None, None, :])
    bad = ~_zero_mask(A, D).all(axis=2)
    if bad.any():
        i, j = (int(v) for v in np.argwhere(bad)[0])
        return None, _non_quadratic_witness(A, u, i, j)
    Q = QuadraticStructure(A, trace, gram, u)
    if not _zero_mask(A, Q.trace_of(u) - sc.one(mode)).all():
        raise VerificationError("trace of the unit is not 1")
    return Q, None


def _non_quadratic_witness(A: Algebra, u, i: int, j: int):
    candidates = []
    ei, ej = A.basis(i), A.basis(j)
    for t in (1, 2, 3, -1, -2):
        candidates.append(ei + A.scalar(t) * ej)
    for s in (1, -1, 2):
        for t in (1, 2, -1):
            candidates.append(A.scalar(s) * u + ei + A.scalar(t) * ej)
    for a in candidates:
        if _square_coefficients(A, u, a) is None:
            return a
    return ei + ej


def extract(A: Algebra):
    """The quadratic structure of ``A`` or None when ``A`` is not quadratic."""
    return extract_with_witness(A)[0]


def involution(Q: QuadraticStructure, a):
    """``a* = 2 <a, 1> 1 - a``."""
    a = coerce(Q.algebra, a)
    return 2 * Q.trace_of(a) * Q.unit - a


def involution_matrix(Q: QuadraticStructure) -> np.ndarray:
    n = Q.algebra.dim
    M = 2 * np.multiply.outer(Q.unit, Q.trace) - sc.identity(n, Q.mode)
    return sc.array(M, Q.mode) if Q.algebra.exact else M


# ------------------------------------------------------------------ form checks

def _int_scaled(M: np.ndarray):
    """Integer array ``L*M`` (object ints) and the scale ``L``."""
    L = 1
    for v in M.ravel():
        L = math.lcm(L, Fraction(v).denominator)
    out = np.empty(M.shape, dtype=object)
    out.ravel()[:] = [int(Fraction(v) * L) for v in M.ravel()]
    return out, L


def _fast(M: np.ndarray, bound_factor: int):
    """int64 view when every intermediate fits, else unchanged."""
    if M.dtype != object:
        return M
    big = max((abs(v) for v in M.ravel()), default=0)
    if big * bound_factor < 2 ** 62:
        return M.astype(np.int64)
    return M


def _check_arrays(Q: QuadraticStructure):
    """Table, gram and trace in a form suitable for batch sweeps.

    Exact rational data is rescaled to integers; the returned scales let the
    callers keep homogeneous comparisons exact.
    """
    A = Q.algebra
    if A.mode == sc.RATIONAL:
        T, LT = _int_scaled(A.table)
        G, LG = _int_scaled(Q.gram)
        t, Lt = _int_scaled(Q.trace)
        return T, G, t, (LT, LG, Lt)
    return A.table, Q.gram, Q.trace, (1, 1, 1)


def check_proper(Q: QuadraticStructure) -> Check:
    """``<ab, b> = <b, b> <a, 1>`` over basis ``a`` and basis/pair-sum ``b``."""
    A = Q.algebra
    n = A.dim
    T, G, t, (LT, LG, Lt) = _check_arrays(Q)
    # polarized in b: <ab, c> + <ac, b> - 2 <b, c> <a, 1>
    M = np.tensordot(T, G, axes=(2, 0))                  # M[a, b, c] = <ab, c>
    lhs = (M + M.transpose(0, 2, 1)) * Lt
    rhs = 2 * G[None, :, :] * t[:, None, None] * LT
    D = lhs - rhs
    bad = ~_zero_mask(A, D, _scale(Q))
    for a, b, c in itertools.product(range(n), repeat=3):
        if c < b or not bad[a, b, c]:
            continue
        x = A.basis(a)
        y = A.basis(b) if b == c else A.basis(b) + A.basis(c)
        return Check.fail("proper", (x, y), f"<ab,b> != <b,b><a,1> at a=e{a}, b={_desc(b, c)}")
    return Check.ok("proper")


def _desc(b, c):
    return f"e{b}" if b == c else f"e{b}+e{c}"


def _scale(Q: QuadraticStructure) -> float:
    if Q.algebra.exact:
        return 1.0
    return max(1.0, float(np.max(np.abs(Q.algebra.table))), float(np.max(np.abs(Q.gram))))


def proper_defect(Q: QuadraticStructure, a, b):
    A = Q.algebra
    return Q.form(multiply(A, a, b), b) - Q.norm(b) * Q.trace_of(a)


def composition_defect(Q: QuadraticStructure, a, b):
    return Q.norm(multiply(Q.algebra, a, b)) - Q.norm(a) * Q.norm(b)


def check_composition(Q: QuadraticStructure) -> Check:
    """``n(ab) = n(a) n(b)`` by full polarization in both arguments."""
    A = Q.algebra
    n = A.dim
    T, G, _, (LT, LG, _) = _check_arrays(Q)
    if A.mode == sc.RATIONAL:
        bound = n ** 4 * max(1, max(abs(v) for v in T.ravel())) ** 2 * \
            max(1, max(abs(v) for v in G.ravel())) * max(LT, LG) ** 2 * 4
        T = _fast(T, bound)
        G = _fast(G, bound)
    # H[a, b, c, d] = <ab, cd>
    TG = np.tensordot(T, G, axes=(2, 0)).reshape(n * n, n)
    H = TG.dot(T.reshape(n * n, n).T).reshape(n, n, n, n)
    # polarization of n(xy) - n(x)n(y) in x -> (a, c), y -> (b, d):
    # <ab, cd> + <ad, cb> - 2 <a, c><b, d>
    lhs = (H + H.transpose(0, 3, 2, 1)) * LG
    rhs = 2 * np.multiply.outer(G, G).transpose(0, 2, 1, 3) * LT * LT
    D = lhs - rhs
    bad = ~_zero_mask(A, D, _scale(Q) ** 3)
    idx = np.argwhere(bad)
    for a, b, c, d in idx:
        if c < a or d < b:
            continue
        xs = [A.basis(a)] if a == c else [A.basis(a), A.basis(c), A.basis(a) + A.basis(c)]
        ys = [A.basis(b)] if b == d else [A.basis(b), A.basis(d), A.basis(b) + A.basis(d)]
        for x in xs:
            for y in ys:
                if not _zero_mask(A, composition_defect(Q, x, y), _scale(Q) ** 3).all():
                    return Check.fail("composition", (x, y), "n(ab) != n(a)n(b)")
    if len(idx):
        raise VerificationError("polarized composition defect without a raw witness")
    return Check.ok("composition")


# ------------------------------------------------------------------ signature and anisotropy

def unit_perp_basis(Q: QuadraticStructure) -> list:
    """Basis of ``{v : <v, 1> = 0}``."""
    return la.nullspace(Q.trace.reshape(1, -1), Q.mode, Q.algebra.tol)


def diagonalize(Q: QuadraticStructure, vectors):
    """Orthogonal basis of ``span(vectors)`` and the form values on it.

    Returns ``(basis, coeffs, isotropic)`` where ``isotropic`` is a nonzero
    vector with ``n(v) = 0`` found on the way (or None).
    """
    A = Q.algebra
    work = [coerce(A, v) for v in vectors]
    basis, coeffs = [], []
    tol_zero = (lambda x: x == 0) if A.exact else \
        (lambda x: abs(x) <= (sc.default_tol() if A.tol is None else A.tol) * _scale(Q))
    while work:
        norms = [Q.norm(w) for w in work]
        for w, v in zip(work, norms):
            if tol_zero(v):
                return basis, coeffs, w
        w, q = work.pop(0), norms[0]
        basis.append(w)
        coeffs.append(q)
        work = [x - (Q.form(x, w) / q) * w for x in work]
        work = [x for x in work if not A.is_zero(x)]
    return basis, coeffs, None


def check_positive_definite(Q: QuadraticStructure) -> Check:
    """Positive definiteness of the form on ``1``-perp (real signature sense)."""
    A = Q.algebra
    perp = unit_perp_basis(Q)
    if not perp:
        return Check.ok("positive-definite-on-unit-perp")
    if A.exact:
        basis, coeffs, iso = diagonalize(Q, perp)
        if iso is not None:
            return Check.fail("positive-definite-on-unit-perp", (iso,), "isotropic vector in 1-perp")
        for b, c in zip(basis, coeffs):
            if c <= 0:
                return Check.fail("positive-definite-on-unit-perp", (b,), f"<v,v> = {c}")
        return Check.ok("positive-definite-on-unit-perp")
    P = np.array(perp).T
    # orthonormalize the Euclidean coordinates first so minors are well scaled
    P, _ = np.linalg.qr(P)
    M = P.T.dot(Q.gram).dot(P)
    M = (M + M.T) / 2
    tol = (sc.default_tol() if A.tol is None else A.tol) * _scale(Q)
    for k in range(1, M.shape[0] + 1):
        if np.linalg.det(M[:k, :k]) <= tol:
            w, V = np.linalg.eigh(M)
            v = P.dot(V[:, 0])
            return Check.fail("positive-definite-on-unit-perp", (v,),
                              f"leading minor {k} is not positive")
    return Check.ok("positive-definite-on-unit-perp")


def _square_class(q: Fraction) -> int:
    """Squarefree integer in the square class of a nonzero rational."""
    q = Fraction(q)
    m = q.numerator * q.denominator
    sign = -1 if m < 0 else 1
    m = abs(m)
    from sympy import factorint
    out = 1
    for p, e in factorint(m).items():
        if e % 2:
            out *= p
    return sign * out


def _hilbert(a: int, b: int, p) -> int:
    """Hilbert symbol ``(a, b)_p`` for nonzero squarefree integers; ``p='inf'`` is real."""
    if p == "inf":
        return -1 if a < 0 and b < 0 else 1

    def split(x):
        e = 0
        while x % p == 0:
            x //= p
            e += 1
        return e, x

    al, u = split(a)
    be, v = split(b)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omg = lambda x: ((x * x - 1) // 8) % 2
        s = eps(u) * eps(v) + al * omg(v) + be * omg(u)
        return -1 if s % 2 else 1

    def legendre(x):
        r = pow(x % p, (p - 1) // 2, p)
        return -1 if r == p - 1 else 1

    s = (-1) ** (al * be * ((p - 1) // 2))
    if be % 2:
        s *= legendre(u)
    if al % 2:
        s *= legendre(v)
    return s


def _hilbert_trivial_square(d: int, p) -> bool:
    # squarefree d is a square in Q_p iff it is 1 in Q_p* / (Q_p*)^2
    if p == "inf":
        return d > 0
    if d % p == 0:
        return False
    if p == 2:
        return d % 8 == 1
    return pow(d % p, (p - 1) // 2, p) == 1


def _locally_isotropic(coeffs: list[int], p) -> bool:
    """Isotropy over ``Q_p`` (or ``R``) of a diagonal form with squarefree coefficients."""
    n = len(coeffs)
    if p == "inf":
        return any(c > 0 for c in coeffs) and any(c < 0 for c in coeffs)
    d = 1
    for c in coeffs:
        d *= c
    d = _square_class(Fraction(d))
    eps = 1
    for i in range(n):
        for j in range(i + 1, n):
            eps *= _hilbert(coeffs[i], coeffs[j], p)
    if n == 1:
        return False
    if n == 2:
        return _hilbert_trivial_square(_square_class(Fraction(-d)), p)
    if n == 3:
        return _hilbert(-1, _square_class(Fraction(-d)), p) == eps
    if n == 4:
        return (not _hilbert_trivial_square(d, p)) or eps == _hilbert(-1, -1, p)
    return True


def rational_form_isotropic(coeffs) -> bool:
    """Hasse-Minkowski decision for the diagonal form ``sum c_i x_i^2`` over Q."""
    cs = [Fraction(c) for c in coeffs]
    if any(c == 0 for c in cs):
        return len(cs) > 0
    cls = [_square_class(c) for c in cs]
    primes = {2}
    from sympy import primefactors
    for c in cls:
        primes.update(primefactors(abs(c)))
    for p in ["inf"] + sorted(primes):
        if not _locally_isotropic(cls, p):
            return False
    return True


def _search_isotropic(coeffs, height: int = 12, max_vars: int = 5):
    """Small integer solution of ``sum c_i x_i^2 = 0`` (coefficient 0 is 1)."""
    cs = [Fraction(c) for c in coeffs]
    m = len(cs)
    for k in range(1, min(m, max_vars) + 1):
        for subset in itertools.combinations(range(m), k):
            sub = [cs[i] for i in subset]
            if all(c > 0 for c in sub):
                continue
            for h in range(1, height + 1):
                for xs in itertools.product(range(-h, h + 1), repeat=k):
                    if max(abs(x) for x in xs) != h or next(x for x in xs if x) < 0:
                        continue
                    val = -sum(c * x * x for c, x in zip(sub, xs))
                    ok, root = sc.is_rational_square(val)
                    if ok:
                        out = [0] * m
                        for i, x in zip(subset, xs):
                            out[i] = x
                        return root, out
    return None


def check_locally_field_extension(Q: QuadraticStructure) -> Check:
    """Every non-scalar element generates a quadratic field extension.

    Equivalently the norm form ``n(s 1 + v) = s^2 + n(v)`` is anisotropic.
    The witness is a pair ``(a, a*)`` with ``a a* = a* a = n(a) 1 = 0``.
    """
    A = Q.algebra
    label = "locally-field-extension"
    perp = unit_perp_basis(Q)
    if not perp:
        return Check.ok(label)
    if not A.exact:
        pd = check_positive_definite(Q)
        if pd.holds:
            return Check.ok(label)
        v = pd.witness[0]
        q = Q.norm(v)
        s = math.sqrt(max(-float(np.real(q)), 0.0))
        a = s * Q.unit + v
        return Check.fail(label, (a, involution(Q, a)), "isotropic element of the norm form")
    if A.mode != sc.RATIONAL:
        raise PreconditionError("field-extension check is defined over the rationals")
    # per-direction square test on the original basis directions first
    for v in perp:
        ok, root = sc.is_rational_square(-Q.norm(v))
        if ok:
            a = root * Q.unit + v
            return Check.fail(label, (a, involution(Q, a)), "discriminant is a rational square")
    basis, coeffs, iso = diagonalize(Q, perp)
    if iso is not None:
        return Check.fail(label, (iso, involution(Q, iso)), "isotropic vector in 1-perp")
    for v, c in zip(basis, coeffs):
        ok, root = sc.is_rational_square(-c)
        if ok:
            a = root * Q.unit + v
            return Check.fail(label, (a, involution(Q, a)), "discriminant is a rational square")
    if all(c > 0 for c in coeffs):
        return Check.ok(label, "positive definite on 1-perp")
    full = [Fraction(1)] + list(coeffs)
    if not rational_form_isotropic(full):
        return Check.ok(label, "anisotropic by the local-global principle")
    found = _search_isotropic(coeffs)
    if found is None:
        return Check.fail(label, (), "norm form is isotropic (local-global principle); "
                                     "no small witness found")
    root, xs = found
    v = A.zero()
    for x, b in zip(xs, basis):
        if x:
            v = v + A.scalar(x) * b
    a = root * Q.unit + v
    return Check.fail(label, (a, involution(Q, a)), "isotropic element of the norm form")


@dataclass(frozen=True)
class FormFlags:
    proper: Check
    composition: Check
    locally_field_extension: Check
    positive_definite: Check

    def to_dict(self) -> dict:
        return {"proper": self.proper.to_dict(),
                "permitsComposition": self.composition.to_dict(),
                "locallyFieldExtension": self.locally_field_extension.to_dict(),
                "positiveDefiniteOnUnitPerp": self.positive_definite.to_dict()}


def form_property_checks(Q: QuadraticStructure) -> FormFlags:
    return FormFlags(check_proper(Q), check_composition(Q),
                     check_locally_field_extension(Q), check_positive_definite(Q))


# ------------------------------------------------------------------ Gram-Schmidt, Riesz, adjoint

def gram_schmidt(Q: QuadraticStructure, vectors, normalize_if_positive: bool = False) -> list:
    """Orthogonalize with respect to the form.

    Raises :class:`DependentVectorsError` carrying a relation ``c`` with
    ``sum c_i v_i = 0`` and :class:`IsotropicVectorError` naming the index of
    an intermediate vector with ``<b, b> = 0``.
    """
    A = Q.algebra
    vs = [coerce(A, v) for v in vectors]
    if not vs:
        return []
    M = np.array(vs, dtype=vs[0].dtype).T
    if la.rank(M, A.mode, A.tol) < len(vs):
        rel = la.nullspace(M, A.mode, A.tol)[0]
        raise DependentVectorsError(rel)
    out = []
    norms = []
    for k, a in enumerate(vs):
        b = a.copy()
        for bj, nj in zip(out, norms):
            b = b - (Q.form(a, bj) / nj) * bj
        nb = Q.norm(b)
        if sc.is_zero(nb, A.mode, None if not A.exact else 0.0):
            raise IsotropicVectorError(k)
        out.append(b)
        norms.append(nb)
    if normalize_if_positive and A.mode == sc.REAL and check_positive_definite(Q).holds:
        out = [b / math.sqrt(nb) if nb > 0 else b for b, nb in zip(out, norms)]
    return out


def riesz_and_adjoint(Q: QuadraticStructure, functional=None, T=None):
    """Riesz vector of ``functional`` and the adjoint ``G^-1 T^t G`` of ``T``."""
    A = Q.algebra
    G = Q.gram
    try:
        Ginv = la.inverse(G, A.mode, A.tol)
    except SingularMatrixError:
        raise PreconditionError("the bilinear form is degenerate") from None
    riesz = adj = None
    if functional is not None:
        phi = sc.array(functional, A.mode) if A.exact else np.asarray(functional, dtype=G.dtype)
        riesz = Ginv.dot(phi)
    if T is not None:
        Tm = sc.array(T, A.mode) if A.exact else np.asarray(T, dtype=G.dtype)
        adj = Ginv.dot(Tm.T).dot(G)
        if A.exact:
            adj = sc.array(adj, A.mode)
    if A.exact and riesz is not None:
        riesz = sc.array(riesz, A.mode)
    return riesz, adj


def adjoint_defect(Q: QuadraticStructure, T, Tstar) -> np.ndarray:
    """Matrix of ``<T e_i, e_j> - <e_i, T* e_j>``."""
    G = Q.gram
    return np.asarray(T).T.dot(G) - G.dot(np.asarray(Tstar))


def natural_norm(Q: QuadraticStructure, a):
    """``(n(a), sqrt(n(a)))``; the square root only in real mode."""
    A = Q.algebra
    if not check_positive_definite(Q).holds:
        raise PreconditionError("natural norm needs a form positive definite on 1-perp")
    na = Q.norm(a)
    if A.mode == sc.REAL:
        return na, math.sqrt(max(na, 0.0))
    return na, None


def power_norm_holds(Q: QuadraticStructure, a, k: int) -> bool:
    """``<a^k, a^k> = <a, a>^k`` with left-normed powers."""
    A = Q.algebra
    ak = power_left_normed(A, a, k)
    lhs = Q.norm(ak)
    rhs = Q.norm(a) ** k
    if A.exact:
        return lhs == rhs
    tol = sc.default_tol() if A.tol is None else A.tol
    return abs(lhs - rhs) <= tol * max(1.0, abs(rhs))

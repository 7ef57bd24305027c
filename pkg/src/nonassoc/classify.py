"""Constructive classification of alternative algebras with an anisotropic norm.

The pipeline finds the unit and the quadratic structure, checks that the
algebra is alternative and that its norm form has no isotropic vectors,
then grows a chain of trace-zero, pairwise anticommuting generators
``g_1, g_2, ...``.  The product basis ``1, g_1, g_2, g_1 g_2, g_3, ...``
(``b_{k + 2^m} = b_k g_{m+1}``) is orthogonal and matches the doubled
table with parameters ``g_m^2``, which yields an explicit isomorphism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg as la
from . import scalars as sc
from ._kernels import contract
from .construct import builtin, cayley_dickson, reals
from .core import Algebra, coerce, find_unit, multiply, zero_divisor_kernels
from .errors import DimensionMismatch, IsotropicVectorError, VerificationError
from .identities import check_linearized_identity
from .quadratic import (QuadraticStructure, check_locally_field_extension,
                        check_positive_definite, extract, extract_with_witness, involution)
from .results import Check, element_to_json

REAL_FIELD = "RealField"
COMPLEX_FIELD = "ComplexField"
QUATERNION = "Quaternion"
OCTONION = "Octonion"
GEN_QUADRATIC = "GeneralizedQuadratic"
GEN_QUATERNION = "GeneralizedQuaternion"
GEN_OCTONION = "GeneralizedOctonion"
NOT_UNITAL = "NotUnital"
NOT_QUADRATIC = "NotQuadratic"
NOT_ALTERNATIVE = "NotAlternative"
JOINT_ZERO_DIVISOR = "HasJointZeroDivisor"
DIMENSION_OBSTRUCTION = "DimensionObstruction"

DIVISION_VERDICTS = (REAL_FIELD, COMPLEX_FIELD, QUATERNION, OCTONION,
                     GEN_QUADRATIC, GEN_QUATERNION, GEN_OCTONION)

_REAL_BY_DIM = {1: REAL_FIELD, 2: COMPLEX_FIELD, 4: QUATERNION, 8: OCTONION}
_GEN_BY_DIM = {2: GEN_QUADRATIC, 4: GEN_QUATERNION, 8: GEN_OCTONION}
_SPLIT_BY_DIM = {2: "SplitComplex", 4: "SplitQuaternion", 8: "SplitOctonion"}
_BUILTIN_BY_DIM = {2: "complexes", 4: "quaternions", 8: "octonions"}


@dataclass
class ClassificationOutcome:
    """Verdict plus everything needed to re-check it.

    ``family`` is the real form of a division verdict (``Quaternion`` for a
    positive definite generalized quaternion algebra over the rationals,
    ``SplitQuaternion`` for an indefinite one); ``iso`` has as columns the
    images in the input algebra of the target basis.
    """

    verdict: str
    family: str | None = None
    params: list = field(default_factory=list)
    iso: np.ndarray | None = None
    target: Algebra | None = None
    certificate: list = field(default_factory=list)
    witness: tuple = ()
    detail: str = ""

    @property
    def is_division(self) -> bool:
        return self.verdict in DIVISION_VERDICTS

    @property
    def dim(self) -> int | None:
        return None if self.iso is None else self.iso.shape[0]

    def to_dict(self) -> dict:
        out = {"verdict": self.verdict, "certificate": list(self.certificate)}
        if self.family is not None:
            out["family"] = self.family
        if self.params:
            out["params"] = [sc.format_scalar(p) for p in self.params]
        if self.iso is not None:
            out["iso"] = [[sc.format_scalar(v) for v in row] for row in self.iso]
            out["dim"] = int(self.iso.shape[0])
        if self.witness:
            out["witness"] = [element_to_json(w) for w in self.witness]
        if self.detail:
            out["detail"] = self.detail
        return out


# ------------------------------------------------------------------ generator chain

def product_basis(A: Algebra, unit, generators) -> list:
    """``1, g1, g2, g1 g2, g3, ...`` with ``b_{k + 2^m} = b_k g_{m+1}``."""
    out = [coerce(A, unit)]
    for g in generators:
        out = out + [multiply(A, b, g) for b in out]
    return out


def _residual(Q: QuadraticStructure, v, basis, norms):
    for b, nb in zip(basis, norms):
        c = Q.form(v, b)
        if not sc.is_zero(c, Q.mode, 0.0 if Q.algebra.exact else None):
            v = v - (c / nb) * b
    return v


def _magnitude(x) -> float:
    return abs(complex(x))


def extend_generator_chain(A: Algebra, Q: QuadraticStructure, generators, candidate=None):
    """Next trace-zero generator orthogonal to the current product basis.

    Without ``candidate`` the basis direction whose residual has the largest
    ``|n|`` is used (lowest index on ties).  Returns None when the product
    basis already spans ``A``; raises :class:`IsotropicVectorError` when the
    residual has norm zero.
    """
    gens = [coerce(A, g) for g in generators]
    P = product_basis(A, Q.unit, gens)
    norms = [Q.norm(b) for b in P]
    _check_orthogonal(Q, P, norms)
    if candidate is not None:
        r = _residual(Q, coerce(A, candidate), P, norms)
        if A.is_zero(r):
            return None
    else:
        best = None
        for i in range(A.dim):
            r_i = _residual(Q, A.basis(i), P, norms)
            if A.is_zero(r_i):
                continue
            m = _magnitude(Q.norm(r_i))
            if best is None or m > best[0]:
                best = (m, r_i)
        if best is None:
            return None
        r = best[1]
    nr = Q.norm(r)
    if sc.is_zero(nr, A.mode, 0.0 if A.exact else None):
        raise IsotropicVectorError(len(P))
    for g in gens:
        if not A.is_zero(multiply(A, r, g) + multiply(A, g, r)):
            raise VerificationError("new generator does not anticommute with the chain")
    return r


def _check_orthogonal(Q: QuadraticStructure, P, norms):
    A = Q.algebra
    for i in range(len(P)):
        if sc.is_zero(norms[i], A.mode, 0.0 if A.exact else None):
            raise IsotropicVectorError(i)
        for j in range(i):
            if not sc.is_zero(Q.form(P[i], P[j]), A.mode, None if not A.exact else 0.0):
                raise VerificationError("product basis is not orthogonal")


# ------------------------------------------------------------------ isomorphism check

def verify_isomorphism(A: Algebra, B: Algebra, M) -> Check:
    """Check that ``M`` (columns: images of ``A``'s basis in ``B``) is an algebra isomorphism.

    Multiplicativity on basis pairs, the unit, squares of basis vectors and
    pair sums and, when both algebras are quadratic, the bilinear form.
    """
    label = "isomorphism"
    if A.mode != B.mode:
        raise DimensionMismatch("isomorphism check needs a common scalar mode")
    n = A.dim
    M = sc.array(M, A.mode) if A.exact else np.asarray(M, dtype=sc.dtype(A.mode))
    if M.shape != (B.dim, n):
        raise DimensionMismatch(f"map must be {B.dim}x{n}, got {M.shape}")
    if B.dim != n or not la.is_invertible(M, A.mode, A.tol):
        return Check.fail(label, (), "map is not invertible")
    certificate = ["invertible"]
    uA, uB = find_unit(A), find_unit(B)
    if (uA is None) != (uB is None):
        return Check.fail(label, (), "only one side is unital")
    if uA is not None:
        if not B.close(M.dot(uA), uB):
            return Check.fail(label, (uA,), "unit is not mapped to the unit")
        certificate.append("unit")
    # lhs[i, j] = M(e_i e_j); rhs[i, j] = M(e_i) M(e_j)
    lhs = np.tensordot(A.table, M, axes=(2, 1))
    cols = np.ascontiguousarray(M.T)
    rhs = contract(cols, cols, B.table)
    D = lhs - rhs
    scale = max(1.0, float(np.max(np.abs(M.astype(complex))))) ** 2 if not A.exact else 1.0
    bad = ~_zero_rows(A, D, scale)
    if bad.any():
        i, j = (int(v) for v in np.argwhere(bad)[0])
        return Check.fail(label, (A.basis(i), A.basis(j)), "M(e_i e_j) != M(e_i) M(e_j)",
                          pair=(i, j))
    certificate.append("multiplicative on basis pairs")
    S = D + D.transpose(1, 0, 2)
    sq = D.diagonal(axis1=0, axis2=1).T          # (e_i)^2
    pair_sq = sq[:, None, :] + sq[None, :, :] + S
    if not (_zero_rows(A, sq, scale).all() and _zero_rows(A, pair_sq, scale).all()):
        return Check.fail(label, (), "square preservation fails")
    certificate.append("squares of basis vectors and pair sums")
    if uA is not None:
        QA, QB = extract(A), extract(B)
        if QA is not None and QB is not None:
            G = M.T.dot(QB.gram).dot(M) - QA.gram
            if not _zero_rows(A, G, scale).all():
                i, j = (int(v) for v in np.argwhere(~_zero_rows(A, G[:, :, None], scale))[0])
                return Check.fail(label, (A.basis(i), A.basis(j)), "bilinear form not preserved",
                                  pair=(i, j))
            certificate.append("bilinear form preserved")
    return Check.ok(label, certificate=certificate)


def _zero_rows(A: Algebra, D, scale: float = 1.0) -> np.ndarray:
    """Mask over all axes but the last: True where the row vanishes."""
    D = np.asarray(D)
    if D.dtype == object:
        nz = np.vectorize(bool, otypes=[bool])(D) if D.size else np.zeros(D.shape, bool)
        return ~nz.any(axis=-1)
    tol = sc.default_tol() if A.tol is None else A.tol
    return (np.abs(D) <= tol * scale).all(axis=-1)


# ------------------------------------------------------------------ classification

def _gaussian_sqrt(z):
    """A square root in Q(i) of an exact complex rational, or None."""
    z = sc.to_scalar(z, sc.COMPLEX_RATIONAL)
    a, b = Fraction(z.re), Fraction(z.im)
    ok, m = sc.is_rational_square(a * a + b * b)
    if not ok:
        return None
    ok1, x = sc.is_rational_square((m + a) / 2)
    ok2, y = sc.is_rational_square((m - a) / 2)
    if not (ok1 and ok2):
        return None
    root = sc.ComplexRational(x, y if b >= 0 else -y)
    return root if root * root == z else None


def _complex_isotropic(Q: QuadraticStructure):
    """Nonzero ``a`` with ``n(a) = 0`` over the complex scalars, when one is easy to write down."""
    from .quadratic import diagonalize, unit_perp_basis
    A = Q.algebra
    perp = unit_perp_basis(Q)
    basis, coeffs, iso = diagonalize(Q, perp)
    if iso is not None:
        return iso
    if A.mode == sc.COMPLEX:
        v, c = basis[0], coeffs[0]
        return complex(np.sqrt(-complex(c))) * Q.unit + v
    for v, c in zip(basis, coeffs):
        s = _gaussian_sqrt(-c)
        if s is not None:
            return s * Q.unit + v
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            r = _gaussian_sqrt(-coeffs[i] / coeffs[j])
            if r is not None:
                return basis[i] + r * basis[j]
    return None


def _zero_divisor_certificate(A: Algebra, Q: QuadraticStructure, a) -> tuple:
    b = involution(Q, a)
    if A.is_zero(a) or not (A.is_zero(multiply(A, a, b)) and A.is_zero(multiply(A, b, a))):
        raise VerificationError("isotropic witness does not give a joint zero divisor")
    return a, b


def classify(A: Algebra) -> ClassificationOutcome:
    """Classify ``A``; failures come back as verdicts, never as exceptions."""
    cert = []
    u = find_unit(A)
    if u is None:
        return ClassificationOutcome(NOT_UNITAL, detail="no two-sided identity")
    cert.append("unit")
    Q, wit = extract_with_witness(A)
    if Q is None:
        return ClassificationOutcome(NOT_QUADRATIC, witness=(wit,),
                                     detail="square leaves span{1, a}")
    cert.append("quadratic")
    for law in ("left-alternative", "flexible", "right-alternative"):
        c = check_linearized_identity(A, law)
        if not c.holds:
            return ClassificationOutcome(NOT_ALTERNATIVE, certificate=cert, witness=c.witness,
                                         detail=f"{law} fails: {c.detail}")
        cert.append(law)
    if A.dim == 1:
        verdict = COMPLEX_FIELD if sc.is_complex(A.mode) else REAL_FIELD
        iso = sc.array([[u[0]]], A.mode) if A.exact else np.array([[u[0]]])
        target = _target(A, 1, [])
        return _finish(A, target, verdict, verdict, [], iso, cert)
    if sc.is_complex(A.mode):
        a = _complex_isotropic(Q)
        if a is None:
            return ClassificationOutcome(JOINT_ZERO_DIVISOR, certificate=cert,
                                         detail="norm form is isotropic over the complex field; "
                                                "no witness with Gaussian rational coordinates")
        return ClassificationOutcome(JOINT_ZERO_DIVISOR, certificate=cert,
                                     witness=_zero_divisor_certificate(A, Q, a),
                                     detail="n(a) = 0 gives a a* = a* a = 0")
    lfe = check_locally_field_extension(Q)
    if not lfe.holds:
        witness = _zero_divisor_certificate(A, Q, lfe.witness[0]) if lfe.witness else ()
        return ClassificationOutcome(JOINT_ZERO_DIVISOR, certificate=cert, witness=witness,
                                     detail=lfe.detail or "norm form is isotropic")
    cert.append("norm form anisotropic, so no joint zero divisors"
                + (f" ({lfe.detail})" if lfe.detail else ""))
    definite = check_positive_definite(Q).holds
    gens = []
    while True:
        P = product_basis(A, u, gens)
        if len(P) >= A.dim:
            break
        if len(P) == 8:
            return _obstruction(A, Q, gens, cert)
        g = extend_generator_chain(A, Q, gens)
        if g is None:
            raise VerificationError("product basis does not span but no direction is left")
        if not A.exact:
            g = g / math.sqrt(float(np.real(Q.norm(g))))
        gens.append(g)
    P = product_basis(A, u, gens)
    iso = np.array(P, dtype=P[0].dtype).T
    if la.rank(iso, A.mode, A.tol) < A.dim:
        raise VerificationError("product basis is dependent")
    cert.append(f"{len(gens)} anticommuting trace-zero generators")
    params = [multiply(A, g, g)[_unit_index(u)] / u[_unit_index(u)] for g in gens]
    n = A.dim
    if A.exact:
        verdict = _GEN_BY_DIM[n]
        family = _REAL_BY_DIM[n] if definite else _SPLIT_BY_DIM[n]
    else:
        verdict = family = _REAL_BY_DIM[n]
        params = [A.scalar(-1)] * len(gens)
    target = _target(A, n, params)
    return _finish(A, target, verdict, family, params, iso, cert)


def _unit_index(u) -> int:
    return next(i for i, v in enumerate(u) if v != 0)


def _target(A: Algebra, n: int, params) -> Algebra:
    if n == 1:
        return reals(A.mode)
    if A.exact:
        return cayley_dickson(params, A.mode, f"{_GEN_BY_DIM[n]}(" +
                              ",".join(sc.format_scalar(p) for p in params) + ")")
    return builtin(_BUILTIN_BY_DIM[n], A.mode)


def _finish(A, target, verdict, family, params, iso, cert) -> ClassificationOutcome:
    if sc.is_complex(A.mode) and not sc.is_complex(target.mode):
        from .construct import complexify
        target = complexify(target)
    check = verify_isomorphism(target, A, iso)
    if not check.holds:
        raise VerificationError(f"constructed map is not an isomorphism: {check.detail}")
    cert = cert + ["isomorphism verified: " + ", ".join(check.extra["certificate"])]
    return ClassificationOutcome(verdict, family, list(params), iso, target, cert)


def _obstruction(A: Algebra, Q: QuadraticStructure, gens, cert) -> ClassificationOutcome:
    """A direction outside the octonion span: report ``(pq, rs)``."""
    p, q, r = gens[:3]
    s = extend_generator_chain(A, Q, gens)
    pq = multiply(A, p, q)
    rs = multiply(A, r, s)
    prod = multiply(A, pq, rs)
    rev = multiply(A, rs, pq)
    vanish = A.is_zero(prod) and A.is_zero(rev)
    detail = "(pq)(rs) = (rs)(pq) = 0" if vanish else "(pq)(rs) or (rs)(pq) is nonzero"
    return ClassificationOutcome(DIMENSION_OBSTRUCTION, certificate=cert, witness=(pq, rs),
                                 detail=f"direction outside the 8-dimensional span; {detail}")


# ------------------------------------------------------------------ commutative probe

@dataclass(frozen=True)
class ProbeOutcome:
    status: str
    hypothesis: str = ""
    witness: tuple = ()
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"status": self.status}
        if self.hypothesis:
            out["hypothesis"] = self.hypothesis
        if self.witness:
            out["witness"] = [element_to_json(w) for w in self.witness]
        if self.detail:
            out["detail"] = self.detail
        return out


def commutative_division_probe(A: Algebra, Q: QuadraticStructure | None = None) -> ProbeOutcome:
    """A commutative quadratic algebra without zero divisors has dim <= 2.

    Zero divisors are looked for among basis vectors and ``e_i +- e_j``,
    then through isotropic vectors of the norm form.
    """
    comm = check_linearized_identity(A, "commutative")
    if not comm.holds:
        return ProbeOutcome("CounterexampleToHypotheses", "commutative", comm.witness,
                            "[a, b] != 0")
    tested = [A.basis(i) for i in range(A.dim)]
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            tested.append(A.basis(i) + A.basis(j))
            tested.append(A.basis(i) - A.basis(j))
    for a in tested:
        left, right, joint = zero_divisor_kernels(A, a)
        ker = left or right
        if ker:
            b = ker[0]
            return ProbeOutcome("CounterexampleToHypotheses", "no zero divisors", (a, b),
                                "a b = 0" if left else "b a = 0")
    if Q is None:
        if find_unit(A) is None:
            return ProbeOutcome("CounterexampleToHypotheses", "quadratic", (), "no unit")
        Q, wit = extract_with_witness(A)
        if Q is None:
            return ProbeOutcome("CounterexampleToHypotheses", "quadratic", (wit,),
                                "square leaves span{1, a}")
    if A.mode in (sc.RATIONAL, sc.REAL):
        lfe = check_locally_field_extension(Q)
        if not lfe.holds:
            return ProbeOutcome("CounterexampleToHypotheses", "no zero divisors", lfe.witness,
                                "isotropic norm: a a* = 0")
    if A.dim > 2:
        raise VerificationError("commutative algebra without zero divisors of dimension > 2")
    return ProbeOutcome("DimAtMostTwoConfirmed", detail=f"dim = {A.dim}")

"""Structure-constant algebras and the elementwise constructions on them.

An algebra of dimension ``n`` is an ``n x n x n`` tensor ``T`` with
``e_i e_j = sum_k T[i, j, k] e_k``.  Elements are 1-D numpy arrays of
coordinates; exact modes use object arrays.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import linalg as la
from . import scalars as sc
from ._kernels import contract
from .errors import (DimensionMismatch, ModeMismatch, PreconditionError,
                     SingularMatrixError, UnitVerificationError, VerificationError)

log = logging.getLogger("nonassoc")

LEFT = "left"
RIGHT = "right"

_INT64_LIMIT = 2 ** 62


class Algebra:
    """A finite-dimensional algebra given by structure constants.

    The table is frozen on construction.  A declared ``unit`` is checked
    against every basis vector and rejected with :class:`UnitVerificationError`
    naming the first failing index.
    """

    def __init__(self, table, mode: str | None = None, *, unit=None, labels=None,
                 name: str = "", metadata: dict | None = None, tol: float | None = None):
        if mode is None:
            mode = sc.mode_of_values(table)
        self.mode = sc.check_mode(mode)
        T = sc.array(table, self.mode)
        if T.ndim != 3 or not (T.shape[0] == T.shape[1] == T.shape[2]) or T.shape[0] < 1:
            raise DimensionMismatch(f"table must have shape (n, n, n) with n >= 1, got {T.shape}")
        T.flags.writeable = False
        self.table = T
        self.dim = T.shape[0]
        self.tol = tol
        self.name = name
        self.metadata = dict(metadata or {})
        if labels is None:
            labels = [f"e{i}" for i in range(self.dim)]
        labels = [str(s) for s in labels]
        if len(labels) != self.dim:
            raise DimensionMismatch("one label per basis vector required")
        self.labels = labels
        self.unit = None
        self.memo: dict = {}
        if unit is not None:
            u = self.element(unit)
            for i in range(self.dim):
                e = self.basis(i)
                if not (self.close(multiply(self, u, e), e) and self.close(multiply(self, e, u), e)):
                    raise UnitVerificationError(i)
            u.flags.writeable = False
            self.unit = u

    # -- construction helpers
    def element(self, values) -> np.ndarray:
        return coerce(self, values)

    def zero(self) -> np.ndarray:
        return sc.zeros(self.dim, self.mode)

    def basis(self, i: int) -> np.ndarray:
        v = sc.zeros(self.dim, self.mode)
        v[i] = sc.one(self.mode)
        return v

    def one(self) -> np.ndarray:
        u = find_unit(self)
        if u is None:
            raise PreconditionError(f"algebra {self.name or '<unnamed>'} has no unit")
        return u

    def scalar(self, value):
        return sc.to_scalar(value, self.mode)

    @property
    def exact(self) -> bool:
        return sc.is_exact(self.mode)

    def close(self, x, y) -> bool:
        return sc.all_zero(np.asarray(x) - np.asarray(y), self.mode, self.tol)

    def is_zero(self, x) -> bool:
        return sc.all_zero(x, self.mode, self.tol)

    def with_unit(self, unit) -> "Algebra":
        return Algebra(self.table, self.mode, unit=unit, labels=self.labels, name=self.name,
                       metadata=self.metadata, tol=self.tol)

    def same_table(self, other: "Algebra") -> bool:
        if self.dim != other.dim:
            return False
        if self.exact and other.exact:
            return bool(np.all(self.table == other.table))
        return bool(np.max(np.abs(self.table.astype(complex) - other.table.astype(complex)))
                    <= (sc.default_tol() if self.tol is None else self.tol))

    def __repr__(self):
        return f"Algebra(name={self.name!r}, dim={self.dim}, mode={self.mode!r})"

    # -- cached structure
    @cached_property
    def pairs(self) -> list[list[list[tuple[int, object]]]]:
        """Sparse view: ``pairs[i][j]`` lists ``(k, c)`` with ``c != 0``."""
        n = self.dim
        mask = sc.nonzero_mask(self.table, self.mode, 0.0)
        out = [[[] for _ in range(n)] for _ in range(n)]
        for i, j, k in zip(*np.nonzero(mask)):
            out[i][j].append((int(k), self.table[i, j, k]))
        return out

    @cached_property
    def integer_table(self) -> tuple[np.ndarray, int, int]:
        """``(L*T, L, max|L*T|)`` as Python ints, ``L`` the denominator lcm."""
        if self.mode != sc.RATIONAL:
            raise ModeMismatch("integer rescaling needs a rational table")
        L = 1
        for v in self.table.ravel():
            L = math.lcm(L, v.denominator)
        ints = np.empty(self.table.shape, dtype=object)
        flat = [int(v * L) for v in self.table.ravel()]
        ints.ravel()[:] = flat
        return ints, L, max((abs(v) for v in flat), default=0)

    def batch_tensor(self, depth: int = 3, coeff_bound: int = 1, terms: int = 8) -> np.ndarray:
        """Tensor for batched evaluation of homogeneous identities.

        Rational tables are rescaled by the denominator lcm; every product of
        an identity of uniform degree picks up the same power of that scale,
        so zero tests are unaffected.  The result is ``int64`` when the
        magnitude bound for ``depth`` nested products of integer elements with
        coefficients up to ``coeff_bound`` fits, Python ints otherwise.
        """
        if self.mode == sc.REAL:
            return self.table.astype(np.float64)
        if self.mode == sc.COMPLEX:
            return self.table.astype(np.complex128)
        if self.mode == sc.COMPLEX_RATIONAL:
            return self.table
        ints, _, M = self.integer_table
        n = self.dim
        bound = terms * (n * max(coeff_bound, 1)) ** (depth + 1) * max(M, 1) ** depth * n ** depth
        if bound < _INT64_LIMIT:
            return ints.astype(np.int64)
        return ints

    @cached_property
    def associator_tensor(self) -> np.ndarray:
        """``As[i, j, k] = (e_i e_j) e_k - e_i (e_j e_k)`` on the batch tensor."""
        T = self.batch_tensor(depth=2)
        left = np.tensordot(T, T, axes=(2, 0))                          # (i, j, k, m)
        right = np.tensordot(T, T, axes=(1, 2)).transpose(0, 2, 3, 1)   # T[i,l,m] T[j,k,l]
        return left - right

    def batch_zero(self, arr, scale_power: int = 0) -> np.ndarray:
        """Boolean mask over the leading axes of a batch result: defect is zero."""
        arr = np.asarray(arr)
        if arr.dtype == object:
            return ~np.vectorize(bool, otypes=[bool])(arr).any(axis=-1) if arr.size else \
                np.ones(arr.shape[:-1], bool)
        if np.issubdtype(arr.dtype, np.integer):
            return ~(arr != 0).any(axis=-1)
        tol = sc.default_tol() if self.tol is None else self.tol
        scale = max(1.0, float(np.max(np.abs(self.table)))) ** max(scale_power, 1)
        return np.max(np.abs(arr), axis=-1) <= tol * scale


# ------------------------------------------------------------------ elements

def coerce(A: Algebra, x) -> np.ndarray:
    """Validate length and mode of an element of ``A``."""
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.shape[0] != A.dim:
        raise DimensionMismatch(f"element of length {arr.shape[0] if arr.ndim == 1 else arr.shape} "
                                f"in an algebra of dimension {A.dim}")
    if A.exact:
        if arr.dtype.kind in "fc":
            raise ModeMismatch(f"floating-point element in {A.mode} mode")
        try:
            return sc.array(arr, A.mode)
        except TypeError as exc:
            raise ModeMismatch(str(exc)) from exc
    if A.mode == sc.REAL and (arr.dtype.kind == "c" or
                              (arr.dtype == object and any(isinstance(v, (complex, sc.ComplexRational))
                                                           for v in arr))):
        raise ModeMismatch("complex element in real mode")
    if arr.dtype == object:
        arr = np.array([complex(v) if A.mode == sc.COMPLEX else float(v) for v in arr])
    return np.array(arr, dtype=sc.dtype(A.mode))


def multiply(A: Algebra, x, y) -> np.ndarray:
    """``sum_{i,j} x_i y_j (e_i e_j)``."""
    x = coerce(A, x)
    y = coerce(A, y)
    if not A.exact:
        return np.einsum("i,j,ijk->k", x, y, A.table)
    out = A.zero()
    xs = [(i, v) for i, v in enumerate(x) if v != 0]
    ys = [(j, v) for j, v in enumerate(y) if v != 0]
    pairs = A.pairs
    for i, xi in xs:
        row = pairs[i]
        for j, yj in ys:
            cell = row[j]
            if cell:
                c = xi * yj
                for k, t in cell:
                    out[k] += c * t
    return out


def multiply_many(A: Algebra, xs, ys) -> np.ndarray:
    """All products ``xs[p] * ys[q]`` as an array of shape ``(P, Q, n)``."""
    X = np.array([coerce(A, x) for x in xs])
    Y = np.array([coerce(A, y) for y in ys])
    return contract(X, Y, A.table)


def mult_operator(A: Algebra, a, side: str = LEFT) -> np.ndarray:
    """Matrix of ``L_a`` (column ``j`` is ``a e_j``) or ``R_a`` (``e_j a``)."""
    a = coerce(A, a)
    if side == LEFT:
        M = np.tensordot(a, A.table, axes=(0, 0)).T
    elif side == RIGHT:
        M = np.tensordot(a, A.table, axes=(0, 1)).T
    else:
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}")
    if A.exact:
        return sc.array(M, A.mode)
    return np.ascontiguousarray(M)


def commutator_associator(A: Algebra, a, b, c=None) -> np.ndarray:
    """``[a, b] = ab - ba`` or, with ``c``, ``[a, b, c] = (ab)c - a(bc)``."""
    if c is None:
        return multiply(A, a, b) - multiply(A, b, a)
    return multiply(A, multiply(A, a, b), c) - multiply(A, a, multiply(A, b, c))


def commutator(A: Algebra, a, b) -> np.ndarray:
    return commutator_associator(A, a, b)


def associator(A: Algebra, a, b, c) -> np.ndarray:
    return commutator_associator(A, a, b, c)


def half(mode: str):
    return Fraction(1, 2) if mode == sc.RATIONAL else sc.to_scalar(Fraction(1, 2), mode) \
        if sc.is_exact(mode) else 0.5


def jordan_product(A: Algebra, a, b) -> np.ndarray:
    """Symmetrized product ``(ab + ba) / 2``."""
    return (multiply(A, a, b) + multiply(A, b, a)) * half(A.mode)


def power_left_normed(A: Algebra, a, k: int) -> np.ndarray:
    """``a^1 = a``, ``a^(k+1) = a a^k``."""
    if k < 1:
        raise ValueError("power exponent must be at least 1")
    a = coerce(A, a)
    p = a.copy()
    for _ in range(k - 1):
        p = multiply(A, a, p)
    return p


# ------------------------------------------------------------------ unit

def find_unit(A: Algebra):
    """The two-sided identity, or None when there is none."""
    if A.unit is not None:
        return A.unit.copy()
    n = A.dim
    T = A.table
    # e e_j = e_j and e_j e = e_j, one row per (j, k)
    rows = []
    rhs = []
    one, zero = sc.one(A.mode), sc.zero(A.mode)
    for j in range(n):
        for k in range(n):
            rows.append(T[:, j, k])
            rhs.append(one if j == k else zero)
            rows.append(T[j, :, k])
            rhs.append(one if j == k else zero)
    M = np.array(rows, dtype=T.dtype)
    u = la.solve(M, sc.array(rhs, A.mode) if A.exact else np.array(rhs, dtype=T.dtype),
                 A.mode, A.tol)
    if u is None:
        return None
    for i in range(n):
        e = A.basis(i)
        if not (A.close(multiply(A, u, e), e) and A.close(multiply(A, e, u), e)):
            return None
    return u


def require_unit(A: Algebra) -> np.ndarray:
    u = find_unit(A)
    if u is None:
        raise PreconditionError("operation requires a unital algebra")
    return u


def unit_from_element(A: Algebra, a, relation) -> np.ndarray:
    """Identity of the subalgebra generated by ``a`` from a vanishing polynomial.

    ``relation`` lists polynomial coefficients in ascending degree,
    ``[c0, c1, ..., cm]``.  It must have ``c0 = 0``, ``c1 != 0`` and
    annihilate ``a`` with left-normed powers; the leading coefficient is
    normalized to 1.  Returns ``e = -c1^-1 (a^(m-1) + c_(m-1) a^(m-2) + ... + c2 a)``
    after checking ``e^2 = e`` and ``ea = ae = a``.
    """
    a = coerce(A, a)
    coeffs = [sc.to_scalar(c, A.mode) if A.exact else c for c in relation]
    while coeffs and sc.is_zero(coeffs[-1], A.mode, 0.0):
        coeffs.pop()
    if len(coeffs) < 2:
        raise PreconditionError("relation must have degree at least 1")
    lead = coeffs[-1]
    coeffs = [c / lead for c in coeffs]
    m = len(coeffs) - 1
    if not sc.is_zero(coeffs[0], A.mode, 0.0):
        raise PreconditionError("relation must have zero constant term")
    if sc.is_zero(coeffs[1], A.mode, 0.0):
        raise PreconditionError("relation needs a nonzero linear coefficient c1")
    powers = [None, a]
    for _ in range(m - 1):
        powers.append(multiply(A, a, powers[-1]))
    value = A.zero()
    for k in range(1, m + 1):
        value = value + coeffs[k] * powers[k]
    if not A.is_zero(value):
        raise PreconditionError("relation does not annihilate the element")
    basis, sub = subalgebra_closure(A, [a], adjoin_unit=False)
    if not bool(np.all(sub.batch_zero(sub.associator_tensor))):
        raise PreconditionError("subalgebra generated by the element is not associative")
    inv_c1 = 1 / coeffs[1]
    e = A.zero()
    for k in range(2, m + 1):
        e = e + coeffs[k] * powers[k - 1]
    e = -inv_c1 * e
    if not (A.close(multiply(A, e, e), e) and A.close(multiply(A, e, a), a)
            and A.close(multiply(A, a, e), a)):
        raise VerificationError("constructed element is not an identity for the generated subalgebra")
    return e


# ------------------------------------------------------------------ inverses

def inverse(A: Algebra, a, Q=None, criterion: str = "operator"):
    """Two-sided inverse of ``a`` or None.

    ``criterion="operator"`` additionally demands ``L_a L_b = L_b L_a = I``;
    ``"two-sided"`` only checks ``ab = ba = 1``.  With a quadratic structure
    ``Q`` and ``n(a) != 0`` the candidate is ``(2<a,1> 1 - a) / n(a)``.
    """
    if criterion not in ("operator", "two-sided"):
        raise ValueError("criterion must be 'operator' or 'two-sided'")
    one = require_unit(A)
    a = coerce(A, a)
    b = None
    if Q is not None:
        na = Q.norm(a)
        if not sc.is_zero(na, A.mode, 0.0 if A.exact else A.tol):
            b = (2 * Q.trace_of(a) * one - a) / na if not A.exact else \
                (2 * Q.trace_of(a) * one - a) * (1 / na)
    if b is None:
        L = mult_operator(A, a, LEFT)
        b = la.solve(L, one, A.mode, A.tol)
        if b is None:
            log.debug("inverse: L_a x = 1 has no solution")
            return None
    if not (A.close(multiply(A, a, b), one) and A.close(multiply(A, b, a), one)):
        log.debug("inverse: candidate fails ab = ba = 1")
        return None
    if criterion == "operator":
        La = mult_operator(A, a, LEFT)
        Lb = mult_operator(A, b, LEFT)
        eye = sc.identity(A.dim, A.mode)
        if not (A.close((La.dot(Lb)).ravel(), eye.ravel())
                and A.close((Lb.dot(La)).ravel(), eye.ravel())):
            log.debug("inverse: candidate fails L_a L_b = L_b L_a = I")
            return None
    return b


# ------------------------------------------------------------------ kernels

def zero_divisor_kernels(A: Algebra, a):
    """Null spaces of ``L_a``, ``R_a`` and of both stacked."""
    a = coerce(A, a)
    if A.is_zero(a):
        raise PreconditionError("the zero element is a trivial zero divisor")
    L = mult_operator(A, a, LEFT)
    R = mult_operator(A, a, RIGHT)
    left = la.nullspace(L, A.mode, A.tol)
    right = la.nullspace(R, A.mode, A.tol)
    joint = la.nullspace(np.concatenate([L, R], axis=0), A.mode, A.tol)
    return left, right, joint


def _rref_basis(vectors, mode, tol):
    if not vectors:
        return [], []
    R, piv = la.rref(np.array(vectors, dtype=vectors[0].dtype), mode, tol)
    return [R[r].copy() for r in range(len(piv))], piv


def subalgebra_closure(A: Algebra, generators, adjoin_unit: bool = False):
    """Smallest (optionally unital) subalgebra containing ``generators``.

    Returns the reduced-echelon basis and the algebra it spans, written in
    that basis (coordinates are the entries at the pivot columns).
    """
    gens = [coerce(A, g) for g in generators]
    if not gens:
        raise ValueError("at least one generator required")
    if adjoin_unit:
        gens = [require_unit(A)] + gens
    basis, piv = _rref_basis(gens, A.mode, A.tol)
    if not basis:
        basis, piv = [], []
    done = 0
    while True:
        size = len(basis)
        new = []
        for i in range(size):
            for j in range(size):
                if i < done and j < done:
                    continue
                new.append(multiply(A, basis[i], basis[j]))
        if not new:
            break
        cand, cpiv = _rref_basis(basis + new, A.mode, A.tol)
        if len(cand) == size:
            break
        done = size
        basis, piv = cand, cpiv
    m = len(basis)
    if m == 0:
        sub = Algebra(sc.zeros((1, 1, 1), A.mode), A.mode, name=f"{A.name}-sub", tol=A.tol)
        return [], sub
    table = sc.zeros((m, m, m), A.mode)
    for i in range(m):
        for j in range(m):
            p = multiply(A, basis[i], basis[j])
            table[i, j, :] = [p[c] for c in piv]
    unit = None
    u = find_unit(A)
    if u is not None:
        coords = np.array([u[c] for c in piv], dtype=u.dtype)
        recon = sum((coords[r] * basis[r] for r in range(m)), A.zero())
        if A.close(recon, u):
            unit = coords
    sub = Algebra(table, A.mode, name=f"{A.name}-sub" if A.name else "", tol=A.tol)
    if unit is not None:
        try:
            sub = sub.with_unit(unit)
        except UnitVerificationError:
            pass
    return basis, sub


def center_and_nucleus(A: Algebra):
    """Bases of ``{a : [a, x] = 0 for all x}`` and of the nucleus."""
    n = A.dim
    T = A.table
    # [a, e_i]_k = sum_m a_m (T[m,i,k] - T[i,m,k])
    C = (T - T.transpose(1, 0, 2)).transpose(1, 2, 0).reshape(n * n, n)
    center = la.nullspace(C, A.mode, A.tol)
    As = _exact_associator(A)
    rows = [As.transpose(1, 2, 3, 0).reshape(-1, n),     # a in slot 1
            As.transpose(0, 2, 3, 1).reshape(-1, n),     # slot 2
            As.transpose(0, 1, 3, 2).reshape(-1, n)]     # slot 3
    nucleus = la.nullspace(np.concatenate(rows, axis=0), A.mode, A.tol)
    return center, nucleus


def _exact_associator(A: Algebra) -> np.ndarray:
    T = A.table
    left = np.tensordot(T, T, axes=(2, 0))
    right = np.tensordot(T, T, axes=(1, 2)).transpose(0, 2, 3, 1)
    out = left - right
    if A.exact:
        return sc.array(out, A.mode)
    return out


# ------------------------------------------------------------------ basis change

def change_of_basis(A: Algebra, P) -> Algebra:
    """Algebra ``B`` with ``x *_B y = P^-1 (Px *_A Py)``.

    Columns of ``P`` are the images in ``A`` of the new basis vectors, so
    ``P`` itself is an isomorphism from ``B`` onto ``A``.
    """
    P = sc.array(P, A.mode) if A.exact else np.asarray(P, dtype=sc.dtype(A.mode))
    n = A.dim
    if P.shape != (n, n):
        raise DimensionMismatch(f"basis change must be {n}x{n}")
    try:
        Pinv = la.inverse(P, A.mode, A.tol)
    except SingularMatrixError:
        raise SingularMatrixError("basis change matrix is singular") from None
    M1 = np.tensordot(P, A.table, axes=(0, 0))                  # (i, b, k)
    M2 = np.tensordot(M1, P, axes=(1, 0)).transpose(0, 2, 1)    # (i, j, k)
    TB = np.tensordot(M2, Pinv, axes=(2, 1))                    # (i, j, l)
    unit = None
    if A.unit is not None:
        unit = Pinv.dot(A.unit)
    return Algebra(TB, A.mode, unit=unit, name=A.name, metadata=A.metadata, tol=A.tol)


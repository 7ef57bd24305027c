"""Algebra constructors: Cayley-Dickson doubling, builtins, complexification, unitization."""

from __future__ import annotations

import re

import numpy as np

from . import scalars as sc
from .core import Algebra, coerce, find_unit
from .errors import PreconditionError

BUILTIN_LEVELS = {
    "reals": [],
    "complexes": [-1],
    "quaternions": [-1, -1],
    "octonions": [-1, -1, -1],
    "sedenions": [-1, -1, -1, -1],
}


def reals(mode: str = sc.RATIONAL) -> Algebra:
    T = sc.zeros((1, 1, 1), mode)
    T[0, 0, 0] = sc.one(mode)
    return Algebra(T, mode, unit=[sc.one(mode)], name="reals")


def _star_matrix(A: Algebra, star):
    n = A.dim
    if star is None:
        if n == 1:
            return sc.identity(1, A.mode)
        from .quadratic import extract, involution_matrix
        Q = extract(A)
        if Q is None:
            raise PreconditionError("doubling needs an involution; the algebra is not quadratic")
        return involution_matrix(Q)
    if callable(star):
        cols = [coerce(A, star(A.basis(j))) for j in range(n)]
        return np.array(cols, dtype=cols[0].dtype).T
    S = sc.array(star, A.mode) if A.exact else np.asarray(star, dtype=sc.dtype(A.mode))
    if S.shape != (n, n):
        raise ValueError(f"involution matrix must be {n}x{n}")
    return S


def cayley_dickson_double(A: Algebra, star=None, gamma=-1):
    """Double ``A`` with parameter ``gamma``.

    Product ``(a, b)(c, d) = (ac + gamma d* b, d a + b c*)``, involution
    ``(a, b)* = (a*, -b)``, unit ``(1, 0)``.  ``star`` is the involution of
    ``A`` as a matrix (column ``j`` is ``e_j*``) or a callable; by default it
    is the identity in dimension 1 and the quadratic involution otherwise.
    Returns the doubled algebra and its involution matrix.
    """
    g = sc.to_scalar(gamma, A.mode)
    if sc.is_zero(g, A.mode, 0.0):
        raise PreconditionError("doubling parameter must be nonzero")
    unit = find_unit(A)
    if unit is None:
        raise PreconditionError("doubling needs a unital algebra")
    S = _star_matrix(A, star)
    n = A.dim
    T = A.table
    # e_i e_j*  and  e_j* e_i, indexed [i, j, k]
    T_right_star = np.tensordot(T, S, axes=(1, 0)).transpose(0, 2, 1)
    T_left_star = np.tensordot(S, T, axes=(0, 0)).transpose(1, 0, 2)
    T2 = sc.zeros((2 * n, 2 * n, 2 * n), A.mode)
    T2[:n, :n, :n] = T
    T2[:n, n:, n:] = T.transpose(1, 0, 2)
    T2[n:, :n, n:] = T_right_star
    T2[n:, n:, :n] = g * T_left_star
    if A.exact:
        T2 = sc.array(T2, A.mode)
    unit2 = np.concatenate([unit, sc.zeros(n, A.mode)])
    levels = list(A.metadata.get("levels", [])) + [sc.format_scalar(g)]
    D = Algebra(T2, A.mode, unit=unit2, metadata={"levels": levels}, tol=A.tol)
    S2 = sc.zeros((2 * n, 2 * n), A.mode)
    S2[:n, :n] = S
    for j in range(n, 2 * n):
        S2[j, j] = -sc.one(A.mode)
    return D, S2


def cayley_dickson(levels, mode: str = sc.RATIONAL, name: str = "") -> Algebra:
    """Iterated doubling of the one-dimensional field with the given parameters."""
    A = reals(mode)
    S = sc.identity(1, mode)
    for g in levels:
        A, S = cayley_dickson_double(A, S, g)
    if name:
        A.name = name
    else:
        A.name = "cd(" + ",".join(sc.format_scalar(sc.to_scalar(g, mode)) for g in levels) + ")"
    return A


def cayley_dickson_with_involution(levels, mode: str = sc.RATIONAL):
    A = reals(mode)
    S = sc.identity(1, mode)
    for g in levels:
        A, S = cayley_dickson_double(A, S, g)
    return A, S


_GEN = re.compile(r"^(genQuaternion|genOctonion)\((.*)\)$")


def builtin(name: str, mode: str = sc.RATIONAL) -> Algebra:
    """Standard algebras by name.

    ``reals``, ``complexes``, ``quaternions``, ``octonions``, ``sedenions``
    and the parametrized ``genQuaternion(a,b)`` / ``genOctonion(a,b,c)``.
    """
    if name in BUILTIN_LEVELS:
        if name == "reals":
            return reals(mode)
        return cayley_dickson(BUILTIN_LEVELS[name], mode, name)
    m = _GEN.match(name.replace(" ", ""))
    if m:
        params = [sc.parse_scalar(p, mode) for p in m.group(2).split(",") if p]
        want = 2 if m.group(1) == "genQuaternion" else 3
        if len(params) != want:
            raise ValueError(f"{m.group(1)} takes {want} parameters")
        return gen_algebra(params, mode)
    raise ValueError(f"unknown builtin algebra {name!r}")


def gen_algebra(params, mode: str = sc.RATIONAL) -> Algebra:
    label = {1: "genComplex", 2: "genQuaternion", 3: "genOctonion"}.get(len(params), "cd")
    vals = [sc.to_scalar(p, mode) for p in params]
    if any(sc.is_zero(v, mode, 0.0) for v in vals):
        raise PreconditionError("generalized parameters must be nonzero")
    return cayley_dickson(vals, mode, f"{label}(" + ",".join(sc.format_scalar(v) for v in vals) + ")")


def gen_quaternion(alpha, beta, mode: str = sc.RATIONAL) -> Algebra:
    return gen_algebra([alpha, beta], mode)


def gen_octonion(alpha, beta, gamma, mode: str = sc.RATIONAL) -> Algebra:
    return gen_algebra([alpha, beta, gamma], mode)


def complexify(A: Algebra) -> Algebra:
    """Same structure constants over the complex scalars of the matching mode."""
    mode = sc.complex_mode(A.mode)
    unit = None if A.unit is None else sc.array(A.unit, mode) if sc.is_exact(mode) else \
        np.asarray(A.unit, dtype=complex)
    table = sc.array(A.table, mode) if sc.is_exact(mode) else A.table.astype(complex)
    name = f"complexify({A.name})" if A.name else ""
    return Algebra(table, mode, unit=unit, labels=A.labels, name=name,
                   metadata=A.metadata, tol=A.tol)


def conjugate(x) -> np.ndarray:
    """Coordinatewise complex conjugation on a complexified algebra."""
    return sc.conj_array(np.asarray(x))


def unitize(A: Algebra) -> Algebra:
    """Adjoin a unit at index 0: ``(r, a)(s, b) = (rs, sa + rb + ab)``.

    Applied as written even when ``A`` already has a unit; the old unit then
    becomes a nontrivial idempotent of the result.
    """
    n = A.dim
    one = sc.one(A.mode)
    T = sc.zeros((n + 1, n + 1, n + 1), A.mode)
    T[0, 0, 0] = one
    for j in range(n):
        T[0, j + 1, j + 1] = one
        T[j + 1, 0, j + 1] = one
    T[1:, 1:, 1:] = A.table
    unit = sc.zeros(n + 1, A.mode)
    unit[0] = one
    labels = ["1"] + list(A.labels)
    if len(set(labels)) != len(labels):
        labels = None
    name = f"unitize({A.name})" if A.name else ""
    return Algebra(T, A.mode, unit=unit, labels=labels, name=name, tol=A.tol)


def direct_sum(A: Algebra, B: Algebra) -> Algebra:
    """Componentwise product on ``A x B``."""
    if A.mode != B.mode:
        raise ValueError("direct sum needs a common scalar mode")
    n, m = A.dim, B.dim
    T = sc.zeros((n + m,) * 3, A.mode)
    T[:n, :n, :n] = A.table
    T[n:, n:, n:] = B.table
    unit = None
    ua, ub = find_unit(A), find_unit(B)
    if ua is not None and ub is not None:
        unit = np.concatenate([ua, ub])
    return Algebra(T, A.mode, unit=unit, name=f"{A.name}+{B.name}", tol=A.tol)


def zero_algebra(n: int, mode: str = sc.RATIONAL) -> Algebra:
    return Algebra(sc.zeros((n, n, n), mode), mode, name=f"zero{n}")


def strictly_upper_triangular(size: int = 3, mode: str = sc.RATIONAL) -> Algebra:
    """Matrix units ``E_ij`` (i < j) with the matrix product."""
    idx = [(i, j) for i in range(size) for j in range(i + 1, size)]
    pos = {p: k for k, p in enumerate(idx)}
    n = len(idx)
    T = sc.zeros((n, n, n), mode)
    for a, (i, j) in enumerate(idx):
        for b, (k, l) in enumerate(idx):
            if j == k:
                T[a, b, pos[(i, l)]] = sc.one(mode)
    return Algebra(T, mode, labels=[f"E{i}{j}" for i, j in idx], name=f"n{size}")


def with_flipped_sign(A: Algebra, i: int, j: int, keep_unit: bool = False) -> Algebra:
    """Copy of ``A`` with the product ``e_i e_j`` negated (a deliberately broken table)."""
    T = A.table.copy()
    T.flags.writeable = True
    T[i, j, :] = -T[i, j, :]
    unit = A.unit if keep_unit else None
    return Algebra(T, A.mode, unit=unit, labels=A.labels, name=f"{A.name}-flip{i}{j}", tol=A.tol)


def to_real(A: Algebra) -> Algebra:
    """Float copy of a rational algebra."""
    if A.mode == sc.REAL:
        return A
    if A.mode != sc.RATIONAL:
        raise ValueError("only rational algebras convert to real mode")
    unit = None if A.unit is None else np.array([float(v) for v in A.unit])
    return Algebra(A.table.astype(float), sc.REAL, unit=unit, labels=A.labels,
                   name=A.name, metadata=A.metadata)

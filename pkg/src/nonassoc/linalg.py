"""Row reduction, kernels, inverses and characteristic polynomials.

Exact rational matrices go through fraction-free (Bareiss) elimination on an
integer rescaling of each row; real and complex matrices use Gauss-Jordan
with partial pivoting and an absolute tolerance scaled by the largest entry.
Polynomials are coefficient lists; the public functions return them highest
degree first (numpy ``poly1d`` order).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import scalars as sc
from .errors import SingularMatrixError


def _scaled_tol(M: np.ndarray, tol: float | None) -> float:
    tol = sc.default_tol() if tol is None else tol
    if M.size == 0:
        return tol
    return tol * max(1.0, float(np.max(np.abs(M))))


# ---------------------------------------------------------------- exact path

def _integer_rows(M: np.ndarray) -> list[list[int]]:
    rows = []
    for row in M:
        den = 1
        for v in row:
            den = math.lcm(den, Fraction(v).denominator)
        rows.append([int(Fraction(v) * den) for v in row])
    return rows


def _bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, m):
            row = rows[i]
            f = row[c]
            if f == 0:
                rows[i] = [(piv * x) // prev for x in row]
            else:
                rows[i] = [(piv * x - f * y) // prev for x, y in zip(row, prow)]
        prev = piv
        pivots.append(c)
        r += 1
    return rows, pivots


def _rref_rational(M: np.ndarray):
    rows, pivots = _bareiss_echelon(_integer_rows(M))
    rank = len(pivots)
    R = sc.zeros((M.shape[0], M.shape[1]), sc.RATIONAL)
    frows = []
    for r, c in enumerate(pivots):
        piv = rows[r][c]
        frows.append([Fraction(x, piv) for x in rows[r]])
    for r in range(rank - 1, -1, -1):
        c = pivots[r]
        for s in range(r):
            f = frows[s][c]
            if f:
                frows[s] = [x - f * y for x, y in zip(frows[s], frows[r])]
    for r in range(rank):
        R[r, :] = frows[r]
    return R, pivots


def _rref_field(M: np.ndarray, mode: str):
    """Plain Gauss-Jordan over an exact field (Gaussian rationals)."""
    R = M.copy()
    m, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if R[i, c] != 0), None)
        if p is None:
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        for i in range(m):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def _rref_numeric(M: np.ndarray, tol: float | None):
    R = np.array(M, dtype=np.complex128 if np.iscomplexobj(M) else np.float64)
    eps = _scaled_tol(R, tol)
    m, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[p, c]) <= eps:
            R[r:, c] = 0
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        col = R[:, c].copy()
        col[r] = 0
        R -= np.outer(col, R[r])
        R[np.abs(R) <= eps * 1e-3] = 0
        pivots.append(c)
        r += 1
    return R, pivots


def rref(M, mode: str, tol: float | None = None):
    """Reduced row echelon form and pivot columns."""
    M = np.asarray(M)
    if M.ndim != 2:
        raise ValueError("rref expects a matrix")
    if M.shape[0] == 0 or M.shape[1] == 0:
        return M.copy(), []
    if mode == sc.RATIONAL:
        return _rref_rational(M)
    if sc.is_exact(mode):
        return _rref_field(M.astype(object), mode)
    return _rref_numeric(M, tol)


def rank(M, mode: str, tol: float | None = None) -> int:
    return len(rref(M, mode, tol)[1])


def nullspace(M, mode: str, tol: float | None = None) -> list[np.ndarray]:
    """Basis of ``{x : M x = 0}``, one vector per free column."""
    M = np.asarray(M)
    ncols = M.shape[1]
    R, pivots = rref(M, mode, tol)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = sc.zeros(ncols, mode)
        v[f] = sc.one(mode)
        for r, c in enumerate(pivots):
            v[c] = -R[r, f]
        basis.append(v)
    return basis


def solve(M, b, mode: str, tol: float | None = None) -> np.ndarray | None:
    """A particular solution of ``M x = b`` (free variables zero), or None."""
    M = np.asarray(M)
    b = np.asarray(b)
    aug = np.concatenate([M, b.reshape(-1, 1)], axis=1)
    R, pivots = rref(aug, mode, tol)
    n = M.shape[1]
    if n in pivots:
        return None
    x = sc.zeros(n, mode)
    for r, c in enumerate(pivots):
        x[c] = R[r, n]
    return x


def inverse(M, mode: str, tol: float | None = None) -> np.ndarray:
    M = np.asarray(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([M, sc.identity(n, mode)], axis=1)
    R, pivots = rref(aug, mode, tol)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return R[:, n:].copy()


def det(M, mode: str):
    M = np.asarray(M)
    n = M.shape[0]
    if n == 0:
        return sc.one(mode)
    if mode == sc.RATIONAL:
        # row scales multiply the determinant; undo them at the end
        scale = Fraction(1)
        rows = []
        for row in M:
            den = 1
            for v in row:
                den = math.lcm(den, Fraction(v).denominator)
            scale *= den
            rows.append([int(Fraction(v) * den) for v in row])
        sign = 1
        prev = 1
        for c in range(n):
            p = next((i for i in range(c, n) if rows[i][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                sign = -sign
            piv = rows[c][c]
            for i in range(c + 1, n):
                f = rows[i][c]
                rows[i] = [(piv * x - f * y) // prev for x, y in zip(rows[i], rows[c])]
            prev = piv
        return Fraction(sign * rows[n - 1][n - 1]) / scale
    if sc.is_exact(mode):
        R = M.astype(object).copy()
        d = sc.one(mode)
        for c in range(n):
            p = next((i for i in range(c, n) if R[i, c] != 0), None)
            if p is None:
                return sc.zero(mode)
            if p != c:
                R[[c, p]] = R[[p, c]]
                d = -d
            d = d * R[c, c]
            for i in range(c + 1, n):
                if R[i, c] != 0:
                    R[i] = R[i] - (R[i, c] / R[c, c]) * R[c]
        return d
    return np.linalg.det(M)


def is_invertible(M, mode: str, tol: float | None = None) -> bool:
    M = np.asarray(M)
    return rank(M, mode, tol) == M.shape[0] == M.shape[1]


def span_contains(basis_rows, v, mode: str, tol: float | None = None) -> bool:
    if len(basis_rows) == 0:
        return sc.all_zero(v, mode, tol)
    B = np.array(list(basis_rows) + [v], dtype=np.asarray(v).dtype)
    return rank(B, mode, tol) == rank(B[:-1], mode, tol)


# ---------------------------------------------------------------- polynomials
# internal representation: ascending coefficient lists, trailing zeros trimmed

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def poly_sub(p, q):
    return poly_add(p, [-c for c in q])


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return _trim(out)


def poly_divmod(p, q):
    p = _trim(p)
    q = _trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    out = [0] * max(len(p) - len(q) + 1, 0)
    r = list(p)
    lead = q[-1]
    while len(r) >= len(q) and r:
        shift = len(r) - len(q)
        top = r[-1]
        if isinstance(top, int) and isinstance(lead, int):
            f = top // lead if top % lead == 0 else Fraction(top, lead)
        elif isinstance(lead, int) and lead == 1:
            f = top
        else:
            f = top / lead
        out[shift] = f
        for i, c in enumerate(q):
            r[shift + i] = r[shift + i] - f * c
        r = _trim(r)
    return _trim(out), r


def poly_exact_div(p, q):
    quo, rem = poly_divmod(p, q)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return quo


def poly_deriv(p):
    return _trim([i * p[i] for i in range(1, len(p))])


def poly_monic(p):
    p = _trim(p)
    if not p:
        return p
    lead = p[-1]
    return [c / lead if not isinstance(c, int) or not isinstance(lead, int) else Fraction(c, lead)
            for c in p]


def poly_gcd(p, q):
    a, b = _trim(p), _trim(q)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return poly_monic(a)


def squarefree_decomposition(p) -> list[tuple[list, int]]:
    """Yun's algorithm over an exact field (ascending coefficients).

    Returns ``[(factor, multiplicity), ...]`` with monic, pairwise coprime,
    square-free factors of positive degree.
    """
    f = poly_monic(p)
    out = []
    if len(f) <= 1:
        return out
    df = poly_deriv(f)
    a = poly_gcd(f, df)
    b = poly_exact_div(f, a)
    c = poly_exact_div(df, a)
    d = poly_sub(c, poly_deriv(b))
    i = 1
    while len(b) > 1:
        a = poly_gcd(b, d) if d else poly_monic(b)
        if len(a) > 1:
            out.append((a, i))
        b = poly_exact_div(b, a)
        c = poly_exact_div(d, a) if d else []
        d = poly_sub(c, poly_deriv(b))
        i += 1
    return out


def _charpoly_bareiss(N: list[list]) -> list:
    """det(zI - N) by fraction-free elimination over the polynomial ring."""
    n = len(N)
    A = [[_trim(([-N[i][j]] if i != j else [-N[i][j], 1])) for j in range(n)] for i in range(n)]
    prev = [1]
    sign = 1
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return []
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        piv = A[c][c]
        for i in range(c + 1, n):
            f = A[i][c]
            row = A[i]
            A[i] = [poly_exact_div(poly_sub(poly_mul(piv, row[j]), poly_mul(f, A[c][j])), prev)
                    if j > c else [] for j in range(n)]
        prev = piv
    det_poly = A[n - 1][n - 1]
    return [sign * x for x in det_poly]


def _charpoly_hessenberg(M: np.ndarray) -> np.ndarray:
    import scipy.linalg

    n = M.shape[0]
    H = scipy.linalg.hessenberg(M)
    polys = [np.array([1.0 + 0j])]
    for k in range(1, n + 1):
        # p_k = (z - h_kk) p_{k-1} - sum_{i<k} h_{ik} prod_{j=i+1..k} h_{j,j-1} p_{i-1}
        pk = np.polymul([1.0, -H[k - 1, k - 1]], polys[k - 1])
        prod = 1.0
        for i in range(k - 1, 0, -1):
            prod *= H[i, i - 1]
            term = H[i - 1, k - 1] * prod * polys[i - 1]
            pk = np.polysub(pk, term)
        polys.append(pk)
    out = np.asarray(polys[n])
    if not np.iscomplexobj(M):
        out = out.real
    return out


def charpoly(M, mode: str) -> list:
    """Monic characteristic polynomial ``det(zI - M)``, highest degree first."""
    M = np.asarray(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("characteristic polynomial of a non-square matrix")
    if n == 0:
        return [sc.one(mode)]
    if mode == sc.RATIONAL:
        den = 1
        for v in M.ravel():
            den = math.lcm(den, Fraction(v).denominator)
        N = [[int(Fraction(v) * den) for v in row] for row in M]
        asc = _charpoly_bareiss(N)
        # p_M(z) = den^-n p_N(den z)
        asc = [Fraction(c) * Fraction(den) ** k / Fraction(den) ** n for k, c in enumerate(asc)]
        asc = asc + [Fraction(0)] * (n + 1 - len(asc))
        return list(reversed(asc))
    if sc.is_exact(mode):
        N = [[M[i, j] for j in range(n)] for i in range(n)]
        asc = _charpoly_bareiss(N)
        asc = [sc.to_scalar(c, mode) for c in asc]
        asc = asc + [sc.zero(mode)] * (n + 1 - len(asc))
        return list(reversed(asc))
    return list(_charpoly_hessenberg(M))


def poly_eval(coeffs_desc, z):
    acc = 0
    for c in coeffs_desc:
        acc = acc * z + c
    return acc

"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The JIT path is used when numba imports and ``NONASSOC_JIT`` is not set to
``0``/``false``/``no``.  Object arrays (exact rationals) always take the
numpy path.  Both paths return identical results on integer input and agree
to rounding on floating input; ``benchmarks/bench_kernels.py`` times them.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_ENV_OFF = ("0", "false", "no", "off")
_jit_enabled = numba is not None and os.environ.get("NONASSOC_JIT", "1").lower() not in _ENV_OFF


def jit_available() -> bool:
    return numba is not None


def jit_enabled() -> bool:
    return _jit_enabled


def set_jit(enabled: bool) -> None:
    """Switch kernels at runtime (benchmarks and equivalence tests)."""
    global _jit_enabled
    _jit_enabled = bool(enabled) and numba is not None


def _njit(func):
    if numba is None:
        return func
    return numba.njit(cache=True, nogil=True)(func)


# ------------------------------------------------------------ sparse tensor view
# Structure tensors are sparse (a Cayley-Dickson table has one nonzero per
# (a, b) slot), so the loop kernels walk a CSR view of T[a, b, :].

def _csr(T):
    n, n2, m = T.shape
    flat = T.reshape(n * n2, m)
    rows, cols = np.nonzero(flat)
    ptr = np.zeros(n * n2 + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n * n2), out=ptr[1:])
    return ptr, cols.astype(np.int64), np.ascontiguousarray(flat[rows, cols])


# ------------------------------------------------------------ contraction
# Z[p, q, l] = sum_{a, b} X[p, a] Y[q, b] T[a, b, l]

def _contract_loops(X, Y, ptr, idx, val, m, out):
    P, n = X.shape
    Q = Y.shape[0]
    W = np.zeros((n, m), dtype=out.dtype)
    for p in range(P):
        W[:, :] = 0
        # W[b, l] = sum_a X[p, a] T[a, b, l]
        for a in range(n):
            xa = X[p, a]
            if xa == 0:
                continue
            for b in range(n):
                r = a * n + b
                for s in range(ptr[r], ptr[r + 1]):
                    W[b, idx[s]] += xa * val[s]
        for q in range(Q):
            for b in range(n):
                yb = Y[q, b]
                if yb == 0:
                    continue
                for l in range(m):
                    out[p, q, l] += yb * W[b, l]
    return out


_contract_jit = _njit(_contract_loops)


def _contract_numpy(X, Y, T):
    W = np.tensordot(X, T, axes=(1, 0))          # (P, n_b, m)
    return np.matmul(Y[None, :, :], W)            # (P, Q, m)


def contract(X: np.ndarray, Y: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Batched bilinear product through a structure tensor."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.dtype == object or Y.dtype == object or T.dtype == object:
        return _contract_object(X, Y, T)
    dt = np.result_type(X, Y, T)
    if _jit_enabled:
        out = np.zeros((X.shape[0], Y.shape[0], T.shape[2]), dtype=dt)
        ptr, idx, val = _csr(np.ascontiguousarray(T, dt))
        return _contract_jit(np.ascontiguousarray(X, dt), np.ascontiguousarray(Y, dt),
                             ptr, idx, val, T.shape[2], out)
    return _contract_numpy(X.astype(dt, copy=False), Y.astype(dt, copy=False),
                           T.astype(dt, copy=False))


def _contract_object(X, Y, T):
    # sparse over T: object arithmetic is the cost, so skip structural zeros
    P, Q, m = X.shape[0], Y.shape[0], T.shape[2]
    out = np.empty((P, Q, m), dtype=object)
    out.fill(0)
    xs = [(a, X[:, a]) for a in range(X.shape[1]) if any(v != 0 for v in X[:, a])]
    ys = {b: Y[:, b] for b in range(Y.shape[1]) if any(v != 0 for v in Y[:, b])}
    for a, xcol in xs:
        for b, ycol in ys.items():
            tl = T[a, b]
            nz = [l for l in range(m) if tl[l] != 0]
            if not nz:
                continue
            outer = np.multiply.outer(xcol, ycol)
            for l in nz:
                out[:, :, l] += outer * tl[l]
    return out


# ------------------------------------------------------------ paired products
# out[p, l] = sum_{a, b} U[p, a] V[p, b] T[a, b, l]

def _paired_loops(U, V, ptr, idx, val, out):
    N, n = U.shape
    for p in range(N):
        for a in range(n):
            ua = U[p, a]
            if ua == 0:
                continue
            for b in range(n):
                vb = V[p, b]
                if vb == 0:
                    continue
                c = ua * vb
                r = a * n + b
                for s in range(ptr[r], ptr[r + 1]):
                    out[p, idx[s]] += c * val[s]
    return out


_paired_jit = _njit(_paired_loops)

_CHUNK = 1 << 22


def _paired_numpy(U, V, T):
    N, n = U.shape
    m = T.shape[2]
    flatT = T.reshape(n * n, m)
    out = np.empty((N, m), dtype=np.result_type(U, V, T))
    step = max(1, _CHUNK // max(n * n, 1))
    for s in range(0, N, step):
        outer = U[s:s + step, :, None] * V[s:s + step, None, :]
        out[s:s + step] = outer.reshape(-1, n * n) @ flatT
    return out


def _paired_object(U, V, T):
    N = U.shape[0]
    n, _, m = T.shape
    out = np.empty((N, m), dtype=object)
    out.fill(0)
    for a in range(n):
        ucol = U[:, a]
        if not any(v != 0 for v in ucol):
            continue
        for b in range(n):
            tl = T[a, b]
            nz = [l for l in range(m) if tl[l] != 0]
            if not nz:
                continue
            prod = ucol * V[:, b]
            for l in nz:
                out[:, l] += prod * tl[l]
    return out


def paired(U: np.ndarray, V: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Row-wise products ``U[p] * V[p]`` through a structure tensor."""
    U = np.asarray(U)
    V = np.asarray(V)
    if U.shape[0] != V.shape[0]:
        raise ValueError("paired product needs equally many rows")
    if U.dtype == object or V.dtype == object or T.dtype == object:
        return _paired_object(U, V, T)
    dt = np.result_type(U, V, T)
    if _jit_enabled:
        out = np.zeros((U.shape[0], T.shape[2]), dtype=dt)
        ptr, idx, val = _csr(np.ascontiguousarray(T, dt))
        return _paired_jit(np.ascontiguousarray(U, dt), np.ascontiguousarray(V, dt),
                           ptr, idx, val, out)
    return _paired_numpy(U.astype(dt, copy=False), V.astype(dt, copy=False),
                         T.astype(dt, copy=False))


# ------------------------------------------------------------ Durand-Kerner

def _dk_loops(coeffs, z, maxiter, tol):
    n = z.shape[0]
    it = 0
    resid = np.inf
    for it in range(1, maxiter + 1):
        resid = 0.0
        for i in range(n):
            zi = z[i]
            pv = coeffs[0] + 0j
            for c in coeffs[1:]:
                pv = pv * zi + c
            den = 1.0 + 0j
            for j in range(n):
                if j != i:
                    den *= zi - z[j]
            if den == 0:
                den = 1e-300 + 0j
            z[i] = zi - pv / den
        for i in range(n):
            zi = z[i]
            pv = coeffs[0] + 0j
            for c in coeffs[1:]:
                pv = pv * zi + c
            if abs(pv) > resid:
                resid = abs(pv)
        if resid <= tol:
            break
    return z, it, resid


_dk_jit = _njit(_dk_loops)


def _dk_numpy(coeffs, z, maxiter, tol):
    n = z.shape[0]
    it = 0
    resid = np.inf
    offdiag = ~np.eye(n, dtype=bool)
    for it in range(1, maxiter + 1):
        # Gauss-Seidel order matches the loop kernel
        for i in range(n):
            pv = np.polyval(coeffs, z[i])
            den = np.prod((z[i] - z)[offdiag[i]])
            if den == 0:
                den = 1e-300
            z[i] = z[i] - pv / den
        resid = float(np.max(np.abs(np.polyval(coeffs, z))))
        if resid <= tol:
            break
    return z, it, resid


def durand_kerner(coeffs_desc, *, maxiter: int = 500, tol: float = 1e-10,
                  offset: float = 0.4):
    """Roots of a monic polynomial (highest degree first).

    Starting points sit on a circle of radius ``1 + max|c_k|`` at angles
    ``2*pi*k/n + offset``.  Returns ``(roots, iterations, residual)``.
    """
    c = np.asarray(coeffs_desc, dtype=np.complex128)
    if c[0] != 1:
        c = c / c[0]
    n = len(c) - 1
    if n == 0:
        return np.zeros(0, np.complex128), 0, 0.0
    radius = 1.0 + float(np.max(np.abs(c[1:]))) if n else 1.0
    z0 = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + offset))
    z0 = z0.astype(np.complex128)
    if _jit_enabled:
        return _dk_jit(c, z0, maxiter, tol)
    return _dk_numpy(c, z0, maxiter, tol)

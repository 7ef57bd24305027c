"""Spectra of elements through their multiplication operators.

In a finite-dimensional alternative algebra ``z1 - a`` is invertible exactly
when ``L_(z1-a) = z - L_a`` is, so the spectrum is the root set of the
characteristic polynomial of ``L_a``.  For a real algebra the same matrix
serves for the complexification, since ``a`` has real coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from . import scalars as sc
from ._kernels import durand_kerner
from .core import LEFT, RIGHT, Algebra, coerce, find_unit, mult_operator, multiply
from .errors import PreconditionError, VerificationError

EXACT = "ExactCharPoly"
NUMERIC = "NumericRoots"
TWO_SIDED = "TwoSided"
LEFT_ONLY = "LeftOnly"
RIGHT_ONLY = "RightOnly"

DK_MAXITER = 500
DK_RESIDUAL = 1e-10
CLUSTER_TOL = 1e-7


@dataclass(frozen=True)
class SpectrumResult:
    mode: str
    side: str
    roots: list
    charpoly: list | None = None
    closed_form: list | None = None
    notes: list = field(default_factory=list)

    def values(self) -> list[complex]:
        """Roots repeated by multiplicity."""
        out = []
        for z, m in self.roots:
            out.extend([z] * m)
        return out

    def distinct(self) -> list[complex]:
        return [z for z, _ in self.roots]

    def to_dict(self) -> dict:
        out = {"mode": self.mode, "side": self.side,
               "roots": [{"re": _fmt(z.real), "im": _fmt(z.imag), "multiplicity": m}
                         for z, m in self.roots]}
        if self.charpoly is not None:
            out["charPoly"] = [sc.format_scalar(c) for c in self.charpoly]
        if self.closed_form is not None:
            out["closedForm"] = [{"re": _fmt(z.real), "im": _fmt(z.imag)} for z in self.closed_form]
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _fmt(x: float) -> str:
    if abs(x) < 5e-13:
        x = 0.0
    return f"{x:.12g}"


def _sort_key(z: complex):
    return (round(z.real, 9), round(z.imag, 9))


def _roots_squarefree(coeffs_desc) -> list[complex]:
    deg = len(coeffs_desc) - 1
    c = [complex(v) for v in coeffs_desc]
    if deg == 1:
        return [-c[1] / c[0]]
    roots, _, _ = durand_kerner(c, maxiter=DK_MAXITER, tol=DK_RESIDUAL)
    # simple roots: a couple of Newton steps clean up the last digits
    dc = [v * (deg - k) for k, v in enumerate(c[:-1])]
    out = []
    for z in roots:
        z = complex(z)
        for _ in range(3):
            d = la.poly_eval(dc, z)
            if d == 0:
                break
            z -= la.poly_eval(c, z) / d
        out.append(z)
    return out


def roots_exact(charpoly_desc) -> list[tuple[complex, int]]:
    """Roots with multiplicities of an exact polynomial via square-free factors."""
    asc = list(reversed(charpoly_desc))
    out = []
    for factor, mult in la.squarefree_decomposition(asc):
        for z in _roots_squarefree(list(reversed(factor))):
            out.append((z, mult))
    return sorted(out, key=lambda zm: _sort_key(zm[0]))


def roots_numeric(charpoly_desc, tol: float | None = None) -> list[tuple[complex, int]]:
    """Durand-Kerner roots of a floating polynomial, clustered into multiplicities.

    An ``m``-fold root perturbed at level ``tol`` spreads over radius about
    ``tol**(1/m)``.  Each unassigned root seeds a cluster with its ``k - 1``
    nearest unassigned neighbours, taking the largest ``k`` whose spread fits
    that radius; centroids are then polished by Newton steps.
    """
    tol = sc.default_tol() if tol is None else tol
    c = np.asarray(charpoly_desc, dtype=complex)
    if len(c) == 1:
        return []
    roots, _, _ = durand_kerner(c, maxiter=DK_MAXITER, tol=DK_RESIDUAL)
    roots = [complex(z) for z in roots]
    free = list(range(len(roots)))
    out = []
    while free:
        seed = free[0]
        near = sorted(free, key=lambda k: abs(roots[k] - roots[seed]))
        chosen = [seed]
        for k in range(len(near), 1, -1):
            group = near[:k]
            cen = sum(roots[g] for g in group) / k
            radius = max(CLUSTER_TOL, tol ** (1.0 / k)) * max(1.0, abs(cen))
            if max(abs(roots[g] - cen) for g in group) <= radius:
                chosen = group
                break
        free = [k for k in free if k not in chosen]
        cen = sum(roots[g] for g in chosen) / len(chosen)
        out.append((_polish(c, cen, len(chosen)), len(chosen)))
    return sorted(out, key=lambda zm: _sort_key(zm[0]))


def _polish(c, z: complex, m: int) -> complex:
    """Newton on the ``(m-1)``-th derivative, where an ``m``-fold root is simple."""
    d = np.asarray(c, dtype=complex)
    for _ in range(m - 1):
        d = np.polyder(d)
    dd = np.polyder(d)
    best = z
    best_val = abs(np.polyval(d, z))
    for _ in range(8):
        step = np.polyval(dd, z)
        if step == 0:
            break
        z = z - np.polyval(d, z) / step
        val = abs(np.polyval(d, z))
        if val < best_val:
            best, best_val = z, val
        else:
            break
    return complex(best)


def _alternative(A: Algebra) -> bool:
    if "alternative" not in A.memo:
        from .identities import check_linearized_identity
        A.memo["alternative"] = (check_linearized_identity(A, "left-alternative").holds
                                 and check_linearized_identity(A, "right-alternative").holds)
    return A.memo["alternative"]


def _operator_spectrum(A: Algebra, a, side: str, label: str) -> SpectrumResult:
    M = mult_operator(A, a, side)
    if A.exact:
        cp = la.charpoly(M, A.mode)
        return SpectrumResult(EXACT, label, roots_exact(cp), cp)
    cp = la.charpoly(M, A.mode)
    return SpectrumResult(NUMERIC, label, roots_numeric(cp, A.tol), None)


def spectrum_complex(A: Algebra, a) -> SpectrumResult:
    """Spectrum of ``a`` in a unital alternative algebra (characteristic polynomial of ``L_a``)."""
    if find_unit(A) is None:
        raise PreconditionError("spectrum needs a unital algebra")
    if not _alternative(A):
        raise PreconditionError("algebra is not alternative; use one_sided_spectrum")
    return _operator_spectrum(A, coerce(A, a), LEFT, TWO_SIDED)


def spectrum_real(A: Algebra, a, Q=None, check_closed_form: bool = True) -> SpectrumResult:
    """Spectrum of ``a`` computed on the complexification of a real algebra.

    For a quadratic algebra the roots are compared with ``p(a) +- sqrt(p(a)^2 - n(a))``.
    """
    if sc.is_complex(A.mode):
        raise PreconditionError("spectrum_real expects a real or rational algebra")
    if find_unit(A) is None:
        raise PreconditionError("spectrum needs a unital algebra")
    if not _alternative(A):
        raise PreconditionError("algebra is not alternative; use one_sided_spectrum")
    a = coerce(A, a)
    res = _operator_spectrum(A, a, LEFT, TWO_SIDED)
    tol = 1e-8
    vals = res.distinct()
    for z in vals:
        if min(abs(z.conjugate() - w) for w in vals) > tol * max(1.0, abs(z)):
            raise VerificationError("real spectrum is not closed under conjugation")
    if Q is None and check_closed_form:
        from .quadratic import extract
        Q = A.memo.get("quadratic", False)
        if Q is False:
            Q = extract(A)
            A.memo["quadratic"] = Q
    closed = None
    if Q is not None:
        p = complex(Q.trace_of(a))
        nrm = complex(Q.norm(a))
        root = np.sqrt(complex(p * p - nrm))
        closed = sorted({_sort_key(p + root): p + root, _sort_key(p - root): p - root}.values(),
                        key=_sort_key)
        for z in vals:
            if min(abs(z - w) for w in closed) > tol * max(1.0, abs(z)):
                raise VerificationError("spectrum disagrees with the quadratic closed form")
    return SpectrumResult(res.mode, res.side, res.roots, res.charpoly, closed)


def one_sided_spectrum(A: Algebra, a, side: str = LEFT) -> SpectrumResult:
    """Roots of the characteristic polynomial of ``L_a`` (or ``R_a``); no alternativity needed."""
    if find_unit(A) is None:
        raise PreconditionError("spectrum needs a unital algebra")
    label = LEFT_ONLY if side == LEFT else RIGHT_ONLY
    if side not in (LEFT, RIGHT):
        raise ValueError("side must be 'left' or 'right'")
    return _operator_spectrum(A, coerce(A, a), side, label)


def closed_form_roots(Q, a) -> list[complex]:
    p = complex(Q.trace_of(a))
    root = np.sqrt(complex(p * p - complex(Q.norm(a))))
    return [p + root, p - root]


def _same_set(xs, ys, tol) -> bool:
    xs = list(xs) + [0j]
    ys = list(ys) + [0j]
    return all(min(abs(x - y) for y in ys) <= tol * max(1.0, abs(x)) for x in xs) and \
        all(min(abs(x - y) for x in xs) <= tol * max(1.0, abs(y)) for y in ys)


def open_question_probe(A: Algebra, samples: int = 20, seed: int = 0, tol: float = 1e-8):
    """Compare ``sigma(ab) u {0}`` with ``sigma(ba) u {0}`` on seeded random pairs.

    Experimental: the equality is an open question for alternative
    algebras, so the output is a record of what was observed, never a check.
    """
    rng = np.random.default_rng(seed)
    records = []
    for s in range(samples):
        if A.exact:
            a = A.element([A.scalar(int(v)) for v in rng.integers(-3, 4, A.dim)])
            b = A.element([A.scalar(int(v)) for v in rng.integers(-3, 4, A.dim)])
        else:
            a = rng.standard_normal(A.dim)
            b = rng.standard_normal(A.dim)
        ab = multiply(A, a, b)
        ba = multiply(A, b, a)
        s_ab = spectrum_complex(A, ab).distinct()
        s_ba = spectrum_complex(A, ba).distinct()
        records.append({"sample": s, "agree": _same_set(s_ab, s_ba, tol),
                        "a": a, "b": b,
                        "sigma_ab": sorted(s_ab, key=_sort_key),
                        "sigma_ba": sorted(s_ba, key=_sort_key)})
    return records


def approx_equal_multisets(xs, ys, tol: float) -> bool:
    xs = sorted(xs, key=_sort_key)
    ys = list(ys)
    if len(xs) != len(ys):
        return False
    for x in xs:
        j = min(range(len(ys)), key=lambda k: abs(ys[k] - x))
        if abs(ys[j] - x) > tol * max(1.0, abs(x)):
            return False
        ys.pop(j)
    return True


def spectral_radius(res: SpectrumResult) -> float:
    return max((abs(z) for z in res.distinct()), default=0.0)


"""Scalar modes and exact Gaussian rationals.

Every algebra carries one of four scalar modes:

``rational``           exact :class:`fractions.Fraction`, stored in object arrays
``real``               machine doubles (``float64``)
``complex-rational``   exact :class:`ComplexRational` pairs, object arrays
``complex``            machine complex (``complex128``)
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

RATIONAL = "rational"
REAL = "real"
COMPLEX_RATIONAL = "complex-rational"
COMPLEX = "complex"

MODES = (RATIONAL, REAL, COMPLEX_RATIONAL, COMPLEX)

DEFAULT_TOL = 1e-9


def default_tol() -> float:
    """Tolerance for real-mode zero tests; ``NONASSOC_TOL`` overrides."""
    raw = os.environ.get("NONASSOC_TOL")
    if raw:
        try:
            return float(raw)
        except ValueError:
            pass
    return DEFAULT_TOL


@dataclass(frozen=True, slots=True)
class ComplexRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _lift(other):
        if isinstance(other, ComplexRational):
            return other
        if isinstance(other, Rational):
            return ComplexRational(Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        # (a,b)(c,d) = (ac - bd, ad + bc)
        return ComplexRational(self.re * o.re - self.im * o.im,
                               self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero")
        num = self * o.conjugate()
        return ComplexRational(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __abs__(self):
        return math.hypot(self.re, self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return ComplexRational(self.re, -self.im)

    def __repr__(self):
        return f"ComplexRational({self.re}, {self.im})"

    def __str__(self):
        return format_scalar(self)


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown scalar mode {mode!r}; expected one of {MODES}")
    return mode


def is_exact(mode: str) -> bool:
    return mode in (RATIONAL, COMPLEX_RATIONAL)


def is_complex(mode: str) -> bool:
    return mode in (COMPLEX_RATIONAL, COMPLEX)


def complex_mode(mode: str) -> str:
    return {RATIONAL: COMPLEX_RATIONAL, REAL: COMPLEX}.get(mode, mode)


def real_mode(mode: str) -> str:
    return {COMPLEX_RATIONAL: RATIONAL, COMPLEX: REAL}.get(mode, mode)


def dtype(mode: str):
    return {RATIONAL: object, REAL: np.float64,
            COMPLEX_RATIONAL: object, COMPLEX: np.complex128}[mode]


def to_scalar(value, mode: str):
    """Coerce ``value`` into ``mode``; exact modes refuse floats."""
    if mode == RATIONAL:
        if isinstance(value, ComplexRational):
            if value.im != 0:
                raise TypeError("complex value in rational mode")
            return value.re
        if isinstance(value, bool) or not isinstance(value, (int, Rational, str)):
            raise TypeError(f"cannot use {type(value).__name__} {value!r} as an exact rational")
        return Fraction(value)
    if mode == COMPLEX_RATIONAL:
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, tuple) and len(value) == 2:
            return ComplexRational(to_scalar(value[0], RATIONAL), to_scalar(value[1], RATIONAL))
        return ComplexRational(to_scalar(value, RATIONAL))
    if mode == REAL:
        if isinstance(value, (complex, np.complexfloating, ComplexRational)):
            raise TypeError("complex value in real mode")
        return float(value)
    return complex(value)


def zero(mode: str):
    return to_scalar(0, mode)


def one(mode: str):
    return to_scalar(1, mode)


def array(values, mode: str) -> np.ndarray:
    """Array of scalars in ``mode`` (object dtype for the exact modes)."""
    values = np.asarray(values, dtype=object) if is_exact(mode) else values
    if is_exact(mode):
        flat = [to_scalar(v, mode) for v in np.asarray(values, dtype=object).ravel()]
        out = np.empty(len(flat), dtype=object)
        out[:] = flat
        return out.reshape(np.shape(values))
    arr = np.asarray(values)
    if np.iscomplexobj(arr) and mode == REAL:
        raise TypeError("complex value in real mode")
    return np.array(arr, dtype=dtype(mode))


def zeros(shape, mode: str) -> np.ndarray:
    if is_exact(mode):
        out = np.empty(shape, dtype=object)
        out.fill(zero(mode))
        return out
    return np.zeros(shape, dtype=dtype(mode))


def identity(n: int, mode: str) -> np.ndarray:
    out = zeros((n, n), mode)
    for i in range(n):
        out[i, i] = one(mode)
    return out


def is_zero(x, mode: str, tol: float | None = None) -> bool:
    if is_exact(mode):
        return x == 0
    return abs(x) <= (default_tol() if tol is None else tol)


def all_zero(arr, mode: str, tol: float | None = None) -> bool:
    arr = np.asarray(arr)
    if arr.size == 0:
        return True
    if is_exact(mode):
        return all(v == 0 for v in arr.ravel())
    return float(np.max(np.abs(arr))) <= (default_tol() if tol is None else tol)


def nonzero_mask(arr: np.ndarray, mode: str, tol: float | None = None) -> np.ndarray:
    if is_exact(mode) or arr.dtype == object:
        return np.vectorize(bool, otypes=[bool])(arr) if arr.size else np.zeros(arr.shape, bool)
    return np.abs(arr) > (default_tol() if tol is None else tol)


def conj(x):
    if isinstance(x, (ComplexRational, complex, np.complexfloating)):
        return x.conjugate()
    return x


def conj_array(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.vectorize(conj, otypes=[object])(arr) if arr.size else arr.copy()
    return np.conj(arr)


def to_complex(x) -> complex:
    return complex(x)


def parse_scalar(text: str, mode: str):
    """Parse ``"p/q"``, an integer or a decimal string.

    In exact modes decimals are read exactly (``"0.1"`` is 1/10).  Complex
    modes also accept the ``"a+bi"`` text written by :func:`format_scalar`.
    """
    text = text.strip().replace(" ", "")
    if not text:
        raise ValueError("empty scalar")
    if is_complex(mode) and text.endswith("i"):
        body = text[:-1]
        cut = max((k for k, ch in enumerate(body) if ch in "+-" and k > 0
                   and body[k - 1] not in "eE"), default=0)
        re_txt, im_txt = body[:cut], body[cut:]
        if im_txt in ("", "+", "-"):
            im_txt += "1"
        base = real_mode(mode)
        re_part = parse_scalar(re_txt, base) if re_txt else zero(base)
        im_part = parse_scalar(im_txt, base)
        if mode == COMPLEX:
            return complex(re_part, im_part)
        return ComplexRational(re_part, im_part)
    if is_exact(mode):
        try:
            return to_scalar(Fraction(text), mode)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational {text!r}") from exc
    if "/" in text:
        num, den = text.split("/", 1)
        value = float(num) / float(den)
    else:
        value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"non-finite real {text!r}")
    return to_scalar(value, mode)


def format_scalar(x) -> str:
    """Canonical text: ``p/q`` for rationals, ``repr`` for doubles."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    if isinstance(x, ComplexRational):
        if x.im == 0:
            return str(x.re)
        if x.re == 0:
            return f"{x.im}i"
        sign = "-" if x.im < 0 else "+"
        return f"{x.re}{sign}{abs(x.im)}i"
    if isinstance(x, (complex, np.complexfloating)):
        return f"{x.real!r}{'+' if x.imag >= 0 else '-'}{abs(x.imag)!r}i"
    return repr(float(x))


def mode_of_values(values) -> str:
    """Guess the narrowest mode that holds every value."""
    vals = list(np.asarray(values, dtype=object).ravel())
    if any(isinstance(v, (complex, np.complexfloating)) for v in vals):
        return COMPLEX
    if any(isinstance(v, ComplexRational) for v in vals):
        return COMPLEX_RATIONAL
    if any(isinstance(v, (float, np.floating)) for v in vals):
        return REAL
    return RATIONAL


def is_rational_square(q) -> tuple[bool, Fraction | None]:
    """Exact square test on reduced numerator and denominator."""
    q = Fraction(q)
    if q < 0:
        return False, None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return True, Fraction(rn, rd)
    return False, None

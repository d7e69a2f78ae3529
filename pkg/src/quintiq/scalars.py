"""Scalar precision backends: hardware doubles, double-double, and mpmath.

Every numeric routine in this package is generic over a *precision context*.
A context knows how to build scalars from exact inputs (ints, Fractions,
decimal strings) and provides the few transcendentals the integrand corpus
needs (sqrt, exp, ln).  Scalars themselves are ordinary numbers supporting
``+ - * / ** abs < ==`` so the quadrature code never branches on the mode.

Available contexts:

* ``DOUBLE``        -- Python floats (binary64).
* ``DOUBLE_DOUBLE`` -- unevaluated sums of two doubles, ~31 significant
  decimal digits, built on error-free transformations.
* ``mp_context(d)`` -- mpmath with ``d`` decimal digits; each instance owns a
  private mpmath context, so concurrent use of different precisions is safe.
"""
from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from math import ldexp
from typing import Union

Scalar = Union[float, "DoubleDouble", object]  # object covers mpmath.mpf

_SPLITTER = 134217729.0  # 2**27 + 1; Dekker split constant, exact in binary64


def _two_sum(a: float, b: float) -> tuple[float, float]:
    """Knuth two-sum: s + e == a + b exactly."""
    s = a + b
    t = s - a
    return s, (a - (s - t)) + (b - t)


def _quick_two_sum(a: float, b: float) -> tuple[float, float]:
    """Dekker fast two-sum; requires |a| >= |b| or a == 0."""
    s = a + b
    return s, b - (s - a)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    """Dekker product: p + e == a * b exactly (no fma on CPython 3.10)."""
    p = a * b
    ah = _SPLITTER * a
    ah = ah - (ah - a)
    al = a - ah
    bh = _SPLITTER * b
    bh = bh - (bh - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


class DoubleDouble:
    """Normalized hi + lo pair with |lo| <= 0.5 ulp(hi); ~106-bit significand.

    Standard double-double operating range: components must stay normal, so
    full accuracy holds for magnitudes roughly within [1e-270, 1e300];
    beyond that the low word degrades gracefully toward double precision.
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float, lo: float = 0.0):
        self.hi = hi
        self.lo = lo

    # -- construction --------------------------------------------------

    @staticmethod
    def from_fraction(fr: Fraction) -> "DoubleDouble":
        # two-stage rounding keeps the conversion exact to the last dd bit
        hi = fr.numerator / fr.denominator
        rem = fr - Fraction(hi)
        lo = rem.numerator / rem.denominator
        s, e = _quick_two_sum(hi, lo)
        return DoubleDouble(s, e)

    def as_fraction(self) -> Fraction:
        return Fraction(self.hi) + Fraction(self.lo)

    # -- arithmetic -----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, DoubleDouble):
            return other
        if isinstance(other, (int, float)):
            f = float(other)
            if f != other:  # int too large for exact float conversion
                return DoubleDouble.from_fraction(Fraction(other))
            return DoubleDouble(f)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        s, e = _two_sum(self.hi, o.hi)
        t, f = _two_sum(self.lo, o.lo)
        e += t
        s, e = _quick_two_sum(s, e)
        e += f
        hi, lo = _quick_two_sum(s, e)
        return DoubleDouble(hi, lo)

    __radd__ = __add__

    def __neg__(self):
        return DoubleDouble(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.__add__(DoubleDouble(-o.hi, -o.lo))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p, e = _two_prod(self.hi, o.hi)
        e += self.hi * o.lo + self.lo * o.hi
        hi, lo = _quick_two_sum(p, e)
        return DoubleDouble(hi, lo)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.hi == 0.0:
            raise ZeroDivisionError("double-double division by zero")
        # long division with two Newton corrections
        q1 = self.hi / o.hi
        r = self - o * DoubleDouble(q1)
        q2 = r.hi / o.hi
        r = r - o * DoubleDouble(q2)
        q3 = r.hi / o.hi
        s, e = _quick_two_sum(q1, q2)
        e += q3
        hi, lo = _quick_two_sum(s, e)
        return DoubleDouble(hi, lo)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return DoubleDouble(1.0) / self.__pow__(-n)
        result = DoubleDouble(1.0)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return DoubleDouble(-self.hi, -self.lo) if self.hi < 0.0 else self

    # -- comparisons (valid because of the normalization invariant) -----

    def _cmp(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.hi != o.hi:
            return -1 if self.hi < o.hi else 1
        if self.lo != o.lo:
            return -1 if self.lo < o.lo else 1
        return 0

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c == 0

    def __ne__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c != 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __hash__(self):
        return hash((self.hi, self.lo))

    def __float__(self):
        return self.hi + self.lo

    def __repr__(self):
        return f"DoubleDouble({self.hi!r}, {self.lo!r})"


_DD_LN2 = DoubleDouble.from_fraction(
    Fraction("0.69314718055994530941723212145817656807550013436026")
)
# Dekker halves of ln2's leading double, for the exact k*ln2 product
_LN2_H = _SPLITTER * _DD_LN2.hi - (_SPLITTER * _DD_LN2.hi - _DD_LN2.hi)
_LN2_L = _DD_LN2.hi - _LN2_H
# 1/j! for the exp kernel, exact to dd precision, highest degree first
_EXP_COEF = [
    DoubleDouble.from_fraction(Fraction(1, math.factorial(j)))
    for j in range(10, -1, -1)
]
_EXP_COEF_FLAT = [(c.hi, c.lo) for c in _EXP_COEF]


def dd_sqrt(x: DoubleDouble) -> DoubleDouble:
    if x.hi < 0.0:
        raise ValueError("square root of a negative double-double")
    if x.hi == 0.0:
        return DoubleDouble(0.0)
    a0 = math.sqrt(x.hi)
    d = x - DoubleDouble(a0) * DoubleDouble(a0)
    corr = d.hi / (2.0 * a0)
    hi, lo = _quick_two_sum(a0, corr)
    return DoubleDouble(hi, lo)


def dd_exp(x: DoubleDouble) -> DoubleDouble:
    # exp(x) = 2^k exp(r), r = x - k ln2, |r| <= ln2/2; r is then scaled by
    # 2^-8 so a degree-10 Taylor kernel reaches dd accuracy, and the result
    # is squared back eight times.  Hot path, so the double-double steps are
    # written out on plain floats instead of DoubleDouble operators.
    rhi = x.hi
    rlo = x.lo
    if rhi > 709.0:
        raise OverflowError("double-double exp overflow")
    if rhi < -709.0:
        return DoubleDouble(math.exp(rhi))
    k = round(rhi * 1.4426950408889634)
    if k:
        kf = float(k)
        # r = x - k*ln2: exact product k*ln2_hi via the split halves, then a
        # two_sum subtraction; k*ln2_lo only touches the tail
        p = kf * _DD_LN2.hi
        c = _SPLITTER * kf
        ah = c - (c - kf)
        al = kf - ah
        pe = ((ah * _LN2_H - p) + ah * _LN2_L + al * _LN2_H) + al * _LN2_L
        s = rhi - p
        t = s - rhi
        e = (rhi - (s - t)) + (-p - t)
        e += rlo - (pe + kf * _DD_LN2.lo)
        rhi = s + e
        rlo = e - (rhi - s)
    rhi *= 0.00390625  # 2**-8
    rlo *= 0.00390625
    shi, slo = _EXP_COEF_FLAT[0]
    for chi, clo in _EXP_COEF_FLAT[1:]:
        # s = s*r + c, double-double throughout
        p = shi * rhi
        c = _SPLITTER * shi
        ah = c - (c - shi)
        al = shi - ah
        c = _SPLITTER * rhi
        bh = c - (c - rhi)
        bl = rhi - bh
        e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
        e += shi * rlo + slo * rhi
        shi = p + e
        slo = e - (shi - p)
        s = shi + chi
        t = s - shi
        e = (shi - (s - t)) + (chi - t)
        e += slo + clo
        shi = s + e
        slo = e - (shi - s)
    for _ in range(8):
        p = shi * shi
        c = _SPLITTER * shi
        ah = c - (c - shi)
        al = shi - ah
        e = ((ah * ah - p) + 2.0 * (ah * al)) + al * al
        e += 2.0 * (shi * slo)
        shi = p + e
        slo = e - (shi - p)
    return DoubleDouble(ldexp(shi, k), ldexp(slo, k))


def dd_ln(x: DoubleDouble) -> DoubleDouble:
    if x.hi <= 0.0:
        raise ValueError("logarithm of a non-positive double-double")
    y0 = math.log(x.hi)
    # one Newton step on exp(y) = x; the double seed leaves O(eps^2) error
    e = dd_exp(DoubleDouble(-y0))
    return DoubleDouble(y0) + x * e - 1


class DoubleContext:
    """Hardware binary64 arithmetic."""

    name = "double"
    eps = 2.220446049250313e-16
    decimal_digits = 17

    def const(self, v) -> float:
        if isinstance(v, float):
            return v
        if isinstance(v, int):
            return float(v)
        if isinstance(v, (str, Fraction)):
            fr = Fraction(v)
            return fr.numerator / fr.denominator
        if isinstance(v, DoubleDouble):
            return float(v)
        raise TypeError(f"cannot convert {type(v).__name__} to double")

    def sqrt(self, x):
        return math.sqrt(x)

    def exp(self, x):
        return math.exp(x)

    def ln(self, x):
        if x <= 0.0:
            raise ValueError("logarithm of a non-positive value")
        return math.log(x)

    def to_float(self, x) -> float:
        return float(x)

    def to_decimal(self, x) -> str:
        return repr(float(x))

    def __repr__(self):
        return "DoubleContext()"


class DoubleDoubleContext:
    """Double-double arithmetic (~31 significant decimal digits)."""

    name = "dd"
    eps = 4.930380657631324e-32  # 2**-104
    decimal_digits = 31

    def const(self, v) -> DoubleDouble:
        if isinstance(v, DoubleDouble):
            return v
        if isinstance(v, float):
            return DoubleDouble(v)
        if isinstance(v, (int, str, Fraction)):
            fr = Fraction(v)
            if fr.denominator == 1 and abs(fr.numerator) < 2**53:
                return DoubleDouble(float(fr.numerator))
            return DoubleDouble.from_fraction(fr)
        raise TypeError(f"cannot convert {type(v).__name__} to double-double")

    def sqrt(self, x):
        return dd_sqrt(x)

    def exp(self, x):
        return dd_exp(x)

    def ln(self, x):
        return dd_ln(x)

    def to_float(self, x) -> float:
        return float(x)

    def to_decimal(self, x) -> str:
        with localcontext() as dctx:
            dctx.prec = 32
            fr = x.as_fraction()
            d = Decimal(fr.numerator) / Decimal(fr.denominator)
        return str(d)

    def __repr__(self):
        return "DoubleDoubleContext()"


class MPFloatContext:
    """mpmath arbitrary precision with a fixed decimal digit count."""

    def __init__(self, digits: int):
        from mpmath.ctx_mp import MPContext

        if digits < 16:
            raise ValueError("mp precision requires at least 16 digits")
        self.digits = digits
        self._mp = MPContext()
        self._mp.dps = digits
        self.name = f"mp:{digits}"
        self.eps = float(self._mp.eps)
        self.decimal_digits = digits

    def const(self, v):
        mp = self._mp
        if isinstance(v, mp.mpf):
            return v
        if isinstance(v, (int, float)):
            return mp.mpf(v)
        if isinstance(v, (str, Fraction)):
            fr = Fraction(v)
            return mp.mpf(fr.numerator) / mp.mpf(fr.denominator)
        if isinstance(v, DoubleDouble):
            return mp.mpf(v.hi) + mp.mpf(v.lo)
        raise TypeError(f"cannot convert {type(v).__name__} to mp float")

    def sqrt(self, x):
        return self._mp.sqrt(x)

    def exp(self, x):
        return self._mp.exp(x)

    def ln(self, x):
        if x <= 0:
            raise ValueError("logarithm of a non-positive value")
        return self._mp.log(x)

    def to_float(self, x) -> float:
        return float(x)

    def to_decimal(self, x) -> str:
        return self._mp.nstr(x, self.digits)

    def __repr__(self):
        return f"MPFloatContext({self.digits})"


DOUBLE = DoubleContext()
DOUBLE_DOUBLE = DoubleDoubleContext()

_MP_CACHE: dict[int, MPFloatContext] = {}

DEFAULT_MP_DIGITS = 50


def mp_context(digits: int = DEFAULT_MP_DIGITS) -> MPFloatContext:
    if digits not in _MP_CACHE:
        _MP_CACHE[digits] = MPFloatContext(digits)
    return _MP_CACHE[digits]


def parse_precision(spec: str) -> object:
    """Resolve a precision name: ``double``, ``dd``, ``mp`` or ``mp:<digits>``."""
    s = spec.strip().lower()
    if s == "double":
        return DOUBLE
    if s == "dd":
        return DOUBLE_DOUBLE
    if s == "mp":
        return mp_context()
    if s.startswith("mp:"):
        try:
            digits = int(s[3:])
        except ValueError:
            raise ValueError(f"invalid mp digit count in precision spec {spec!r}")
        return mp_context(digits)
    raise ValueError(f"unknown precision {spec!r} (expected double, dd, mp or mp:<digits>)")

"""Decimal floating point with an integer exponent far beyond IEEE range.

Scattering through long classically forbidden regions multiplies wave
amplitudes by factors like 10**40000, so ordinary doubles overflow long
before any physical answer is reached.  ``XReal`` keeps a double mantissa
normalized into [1, 10) next to an unbounded (but range-checked) integer
decimal exponent; ``XComplex`` is a pair of those.  Mantissa arithmetic is
plain IEEE double, so every operation keeps at least 15 significant
decimal digits.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction

__all__ = [
    "EXP_LIMIT",
    "ExponentRangeError",
    "RangeFlag",
    "XReal",
    "XComplex",
    "xadd",
    "xmul",
    "to_float_checked",
    "exp_as_xreal",
    "format_xreal",
]

# Exponents must stay inside a signed 64-bit-ish budget; anything past this
# is treated as a logic error upstream, not a value to keep computing with.
EXP_LIMIT = 9_000_000_000_000_000_000

# Exponent gap beyond which the smaller addend cannot touch a 15-digit
# mantissa; xadd returns the larger operand unchanged.
ADD_CUTOFF = 20


class ExponentRangeError(OverflowError):
    """Decimal exponent left the representable window."""


class RangeFlag(enum.Enum):
    """Outcome markers for conversions back to IEEE doubles."""

    OVERFLOW = "overflow"
    UNDERFLOW = "underflow"


def _checked_exp(e: int) -> int:
    if -EXP_LIMIT <= e <= EXP_LIMIT:
        return e
    raise ExponentRangeError(f"decimal exponent {e} outside +-{EXP_LIMIT}")


class XReal:
    """One extended-range real: ``mantissa * 10**exp10``.

    The mantissa is an IEEE double with ``1 <= |m| < 10`` (or exactly 0.0
    with ``exp10 == 0``).  Construction through :meth:`from_float` or the
    arithmetic operators keeps that invariant; the raw constructor trusts
    its caller.
    """

    __slots__ = ("m", "e")

    def __init__(self, m: float, e: int):
        self.m = m
        self.e = e

    # -- construction ------------------------------------------------

    @classmethod
    def zero(cls) -> "XReal":
        return cls(0.0, 0)

    @classmethod
    def from_float(cls, value: float) -> "XReal":
        if value == 0.0:
            return cls(0.0, 0)
        if not math.isfinite(value):
            raise ValueError(f"cannot represent {value!r}")
        e = math.floor(math.log10(abs(value)))
        m = value / 10.0 ** e
        # log10 can land one off at power-of-ten boundaries
        if abs(m) >= 10.0:
            m /= 10.0
            e += 1
        elif abs(m) < 1.0:
            m *= 10.0
            e -= 1
        return cls(m, _checked_exp(e))

    @classmethod
    def from_parts(cls, m: float, e: int) -> "XReal":
        """Build from an arbitrary (mantissa, exponent) pair, normalizing."""
        if m == 0.0:
            return cls(0.0, 0)
        if not math.isfinite(m):
            raise ValueError(f"cannot represent mantissa {m!r}")
        x = cls.from_float(m)
        return cls(x.m, _checked_exp(x.e + e))

    # -- helpers -----------------------------------------------------

    def is_zero(self) -> bool:
        return self.m == 0.0

    def copy(self) -> "XReal":
        return XReal(self.m, self.e)

    # -- arithmetic --------------------------------------------------

    def __neg__(self) -> "XReal":
        return XReal(-self.m, self.e)

    def __abs__(self) -> "XReal":
        return XReal(abs(self.m), self.e)

    def __add__(self, other: "XReal") -> "XReal":
        return xadd(self, other)

    def __sub__(self, other: "XReal") -> "XReal":
        return xadd(self, XReal(-other.m, other.e))

    def __mul__(self, other: "XReal") -> "XReal":
        return xmul(self, other)

    def __truediv__(self, other: "XReal") -> "XReal":
        if other.m == 0.0:
            raise ZeroDivisionError("XReal division by zero")
        if self.m == 0.0:
            return XReal(0.0, 0)
        m = self.m / other.m  # in (0.1, 10]
        e = self.e - other.e
        if abs(m) < 1.0:
            m *= 10.0
            e -= 1
        elif abs(m) >= 10.0:
            m /= 10.0
            e += 1
        return XReal(m, _checked_exp(e))

    def reciprocal(self) -> "XReal":
        return XReal(1.0, 0) / self

    def sqrt(self) -> "XReal":
        """Square root; domain error on negatives."""
        if self.m < 0.0:
            raise ValueError("XReal sqrt of negative value")
        if self.m == 0.0:
            return XReal(0.0, 0)
        m, e = self.m, self.e
        if e % 2:
            m *= 10.0
            e -= 1
        m = math.sqrt(m)  # in [1, 10)
        return XReal(m, e // 2)

    def scaled10(self, shift: int) -> "XReal":
        """Same mantissa, exponent shifted by ``shift``."""
        if self.m == 0.0:
            return XReal(0.0, 0)
        return XReal(self.m, _checked_exp(self.e + shift))

    def scaled_by(self, factor: float) -> "XReal":
        """Product with an ordinary float."""
        return xmul(self, XReal.from_float(factor))

    # -- comparisons: total order by sign, then exponent, then mantissa

    def _cmp(self, other: "XReal") -> int:
        sa = 0 if self.m == 0.0 else (1 if self.m > 0.0 else -1)
        sb = 0 if other.m == 0.0 else (1 if other.m > 0.0 else -1)
        if sa != sb:
            return -1 if sa < sb else 1
        if sa == 0:
            return 0
        if self.e != other.e:
            bigger = 1 if self.e > other.e else -1
            return bigger * sa
        if self.m == other.m:
            return 0
        return (1 if self.m > other.m else -1)

    def __lt__(self, other: "XReal") -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: "XReal") -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: "XReal") -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: "XReal") -> bool:
        return self._cmp(other) >= 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, XReal):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self) -> int:
        return hash((self.m, self.e))

    # -- output ------------------------------------------------------

    def to_float_checked(self):
        return to_float_checked(self)

    def log10_abs(self) -> float:
        """log10 of the magnitude as a plain float (zero -> -inf)."""
        if self.m == 0.0:
            return -math.inf
        return math.log10(abs(self.m)) + self.e

    def __str__(self) -> str:
        return format_xreal(self)

    def __repr__(self) -> str:
        return f"XReal({self.m!r}, {self.e!r})"


def xadd(a: XReal, b: XReal) -> XReal:
    """Sum of two XReals, exact short-circuit for far-apart exponents."""
    if a.m == 0.0:
        return b.copy()
    if b.m == 0.0:
        return a.copy()
    if a.e < b.e:
        a, b = b, a
    d = a.e - b.e
    if d > ADD_CUTOFF:
        return a.copy()
    # 10**d is exact for d <= 22
    m = a.m + b.m / 10.0 ** d
    if m == 0.0:
        return XReal(0.0, 0)
    e = a.e
    am = abs(m)
    if am >= 10.0:
        m /= 10.0
        e += 1
    elif am < 1.0:
        # cancellation can drop many digits at once
        while abs(m) < 1.0:
            m *= 10.0
            e -= 1
    return XReal(m, _checked_exp(e))


def xmul(a: XReal, b: XReal) -> XReal:
    if a.m == 0.0 or b.m == 0.0:
        return XReal(0.0, 0)
    m = a.m * b.m  # in [1, 100)
    e = a.e + b.e
    if abs(m) >= 10.0:
        m /= 10.0
        e += 1
    return XReal(m, _checked_exp(e))


def to_float_checked(x: XReal):
    """IEEE double for ``x``, or a :class:`RangeFlag` if it cannot hold one.

    Never returns an infinity, and never silently flushes a nonzero value
    to zero.
    """
    if x.m == 0.0:
        return 0.0
    if x.e > 308:
        return RangeFlag.OVERFLOW
    if x.e < -324:
        return RangeFlag.UNDERFLOW
    if -307 <= x.e <= 307:
        value = x.m * 10.0 ** x.e
    elif x.e > 307:
        value = (x.m * 1e300) * 10.0 ** (x.e - 300)
    else:
        value = (x.m * 1e-300) * 10.0 ** (x.e + 300)
    if math.isinf(value):
        return RangeFlag.OVERFLOW
    if value == 0.0:
        return RangeFlag.UNDERFLOW
    return value


def format_xreal(x: XReal) -> str:
    """Render as ``+m.mmmmmmmmmmmmmmE+e`` with 15 significant digits."""
    if x.m == 0.0:
        return "+0.00000000000000E+0"
    body = f"{x.m:+.14f}"
    e = x.e
    if body[1:3] == "10":  # mantissa rounded up to 10.0...
        body = body[0] + "1.00000000000000"
        e += 1
    return f"{body}E{e:+d}"


# ---------------------------------------------------------------------------
# exp(y) -> XReal without intermediate overflow.
#
# Write y = n*ln(10) + r with integer n and r in [0, ln 10); then
# exp(y) = exp(r) * 10**n.  n*LN10_HI is kept exact by a Dekker split of
# ln(10), and a third term absorbs the gap between the IEEE double and the
# true ln(10), which otherwise leaks n * 2e-16 into r.

_LN10 = math.log(10.0)
_SPLIT = 2.0 ** 28 + 1.0
_t = _LN10 * _SPLIT
_LN10_HI = _t - (_t - _LN10)  # ~25 significant bits
_LN10_LO = _LN10 - _LN10_HI
del _t

# past this |y| the n*LN10_HI product is no longer exact; fall back to
# exact rational reduction with a 50-digit ln(10)
_DEKKER_LIMIT = 1e8
_LN10_FRAC = Fraction(
    23025850929940456840179914546843642076011014886288,
    10 ** 49,
)
_LN10_TAIL = float(_LN10_FRAC - Fraction(_LN10))


def exp_as_xreal(y: float) -> XReal:
    """exp(y) as an XReal, valid far outside double range."""
    if y == 0.0:
        return XReal(1.0, 0)
    if not math.isfinite(y):
        raise ValueError(f"cannot exponentiate {y!r}")
    if abs(y) <= _DEKKER_LIMIT:
        n = math.floor(y / _LN10)
        r = (y - n * _LN10_HI) - n * _LN10_LO - n * _LN10_TAIL
        # guard the floor landing one off
        if r < 0.0:
            n -= 1
            r += _LN10
        elif r >= _LN10:
            n += 1
            r -= _LN10
    else:
        yf = Fraction(y)
        n = int(yf / _LN10_FRAC)
        if yf < 0:
            n -= 1  # emulate floor for negatives
        r = float(yf - n * _LN10_FRAC)
    m = math.exp(r)  # in [1, 10)
    if m >= 10.0:
        m /= 10.0
        n += 1
    elif m < 1.0:
        m *= 10.0
        n -= 1
    return XReal(m, _checked_exp(n))


class XComplex:
    """Complex number with :class:`XReal` real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: XReal, im: XReal):
        self.re = re
        self.im = im

    @classmethod
    def from_complex(cls, z: complex) -> "XComplex":
        return cls(XReal.from_float(z.real), XReal.from_float(z.imag))

    def copy(self) -> "XComplex":
        return XComplex(self.re.copy(), self.im.copy())

    def __add__(self, other: "XComplex") -> "XComplex":
        return XComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "XComplex") -> "XComplex":
        return XComplex(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "XComplex":
        return XComplex(-self.re, -self.im)

    def __mul__(self, other: "XComplex") -> "XComplex":
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        return XComplex(re, im)

    def scale(self, factor: XReal) -> "XComplex":
        return XComplex(self.re * factor, self.im * factor)

    def scaled10(self, shift: int) -> "XComplex":
        return XComplex(self.re.scaled10(shift), self.im.scaled10(shift))

    def conj(self) -> "XComplex":
        return XComplex(self.re.copy(), -self.im)

    def abs2(self) -> XReal:
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> XReal:
        return self.abs2().sqrt()

    def __truediv__(self, other: "XComplex") -> "XComplex":
        d = other.abs2()
        if d.is_zero():
            raise ZeroDivisionError("XComplex division by zero")
        num = self * other.conj()
        return XComplex(num.re / d, num.im / d)

    def to_complex_checked(self):
        """Plain complex, or the RangeFlag that blocked either part."""
        re = to_float_checked(self.re)
        if isinstance(re, RangeFlag):
            return re
        im = to_float_checked(self.im)
        if isinstance(im, RangeFlag):
            return im
        return complex(re, im)

    def __repr__(self) -> str:
        return f"XComplex({self.re!r}, {self.im!r})"

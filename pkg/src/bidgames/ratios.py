"""Exact rational helpers shared across the package.

All user-facing numbers (weights, budgets, bids, probabilities) are
`fractions.Fraction`.  Strings are parsed exactly: "1/3", "0.25", "-2",
"7e-3" all denote the rational they look like; binary floating point never
enters a file format.

Long matches additionally use `Dyadic`, an exact m/2**e representation
whose arithmetic is gcd-free: a poorman budget ledger gains a few
denominator bits every round, and Fraction's per-operation normalization
turns quadratic in the match length while shift-based dyadic arithmetic
stays linear.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

_DECIMAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_FRACTION_RE = re.compile(r"^([+-]?\d+)\s*/\s*(\d+)$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse an exact rational from "p/q", decimal, or integer notation."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = text.strip()
    m = _FRACTION_RE.match(s)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in rational {text!r}")
        return Fraction(num, den)
    if _DECIMAL_RE.match(s):
        return Fraction(s)
    raise ValueError(f"not a rational: {text!r}")


def format_rational(x: Fraction | "Dyadic") -> str:
    """Serialize exactly; decimal when the denominator is 2^a*5^b, else p/q."""
    if isinstance(x, Dyadic):
        num, den = x.as_integer_ratio()
    else:
        x = Fraction(x)
        num, den = x.numerator, x.denominator
    if den == 1:
        return str(num)
    d, two, five = den, 0, 0
    while d % 2 == 0:
        d //= 2
        two += 1
    while d % 5 == 0:
        d //= 5
        five += 1
    if d == 1:
        # Terminating decimal expansion.
        exp = max(two, five)
        scaled = abs(num) * 2 ** (exp - two) * 5 ** (exp - five)
        digits = str(scaled).rjust(exp + 1, "0")
        sign = "-" if num < 0 else ""
        return f"{sign}{digits[:-exp]}.{digits[-exp:]}"
    return f"{num}/{den}"


_STRIP_PROBE = (1 << 64) - 1


class Dyadic:
    """Exact dyadic rational m/2**e under shift-based arithmetic.

    Alignment is a shift, comparison against p/q multiplies the small
    side only, and nothing is normalized beyond stripping trailing zero
    bits when a whole 64-bit block of them shows up.  Operations that
    meet a non-dyadic Fraction fall back to exact Fraction arithmetic,
    so mixing is safe; the fast paths are closed over dyadics.
    """

    __slots__ = ("m", "e")

    def __init__(self, m: int, e: int = 0):
        if e < 0:
            m <<= -e
            e = 0
        if m == 0:
            e = 0
        elif e and not m & _STRIP_PROBE:
            v = (m & -m).bit_length() - 1
            if v > e:
                v = e
            m >>= v
            e -= v
        self.m = m
        self.e = e

    def as_integer_ratio(self) -> tuple[int, int]:
        m, e = self.m, self.e
        if m and e:
            v = (m & -m).bit_length() - 1
            if v > e:
                v = e
            m >>= v
            e -= v
        return m, 1 << e

    def to_fraction(self) -> Fraction:
        return Fraction(*self.as_integer_ratio())

    def _align(self, other: "Dyadic") -> tuple[int, int, int]:
        e = self.e if self.e >= other.e else other.e
        return self.m << (e - self.e), other.m << (e - other.e), e

    def __add__(self, other):
        o = to_dyadic(other)
        if o is None:
            if isinstance(other, Fraction):
                return self.to_fraction() + other
            return NotImplemented
        a, b, e = self._align(o)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        o = to_dyadic(other)
        if o is None:
            if isinstance(other, Fraction):
                return self.to_fraction() - other
            return NotImplemented
        a, b, e = self._align(o)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        o = to_dyadic(other)
        if o is None:
            if isinstance(other, Fraction):
                return other - self.to_fraction()
            return NotImplemented
        a, b, e = self._align(o)
        return Dyadic(b - a, e)

    def __mul__(self, other):
        o = to_dyadic(other)
        if o is None:
            if isinstance(other, Fraction):
                return self.to_fraction() * other
            return NotImplemented
        return Dyadic(self.m * o.m, self.e + o.e)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int) and other > 0 and not other & (other - 1):
            return Dyadic(self.m, self.e + other.bit_length() - 1)
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() / other
        if isinstance(other, Dyadic):
            return self.to_fraction() / other.to_fraction()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return other / self.to_fraction()
        return NotImplemented

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.m, self.e)

    def __abs__(self) -> "Dyadic":
        return Dyadic(abs(self.m), self.e)

    def __bool__(self) -> bool:
        return self.m != 0

    def _cmp(self, other):
        o = to_dyadic(other)
        if o is not None:
            a, b, _ = self._align(o)
            return (a > b) - (a < b)
        if isinstance(other, Fraction):
            a = self.m * other.denominator
            b = other.numerator << self.e
            return (a > b) - (a < b)
        return None

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        return hash(self.to_fraction())

    def __float__(self) -> float:
        n, d = self.as_integer_ratio()
        return n / d

    def __repr__(self) -> str:
        return f"Dyadic({self.m}, {self.e})"


def to_dyadic(x) -> Dyadic | None:
    """Dyadic view of an exactly dyadic amount; None for anything else."""
    if isinstance(x, Dyadic):
        return x
    if isinstance(x, int):
        return Dyadic(x)
    if isinstance(x, Fraction):
        d = x.denominator
        if not d & (d - 1):
            return Dyadic(x.numerator, d.bit_length() - 1)
    return None


def as_fraction(x) -> Fraction:
    """Exact Fraction view of an int, Fraction, or Dyadic amount."""
    if isinstance(x, Dyadic):
        return x.to_fraction()
    return Fraction(x)


def quantize_down(x: Fraction | Dyadic, bits: int = 96) -> Fraction | Dyadic:
    """Largest dyadic rational with a <=`bits`-bit mantissa that is <= x.

    Used by simulator-facing strategies so that exact budget ledgers stay
    cheap over long plays; relative error is < 2^(1-bits).  Requires x >= 0.
    Returns the input's kind: Fraction in, Fraction out; Dyadic in,
    Dyadic out.
    """
    if isinstance(x, Dyadic):
        if x.m < 0:
            raise ValueError("quantize_down expects a nonnegative amount")
        drop = x.m.bit_length() - bits
        if drop <= 0:
            return x
        return Dyadic(x.m >> drop, x.e - drop)
    if x < 0:
        raise ValueError("quantize_down expects a nonnegative amount")
    if x == 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    shift = bits - (n.bit_length() - d.bit_length())
    if shift >= 0:
        m = (n << shift) // d
        return Fraction(m, 1 << shift)
    m = n // (d << -shift)
    return Fraction(m << -shift)


def scaled_floor(scale: Fraction, x: Fraction | Dyadic, bits: int = 96) -> Fraction | Dyadic:
    """Dyadic floor of scale*x with a <=`bits`-bit mantissa.

    For a Dyadic x the product is never formed: only the small numerator
    of `scale` multiplies the mantissa and only the small denominator
    divides, so the cost stays linear in the size of x even when `scale`
    is not dyadic.  Relative error below 2^(1-bits); needs scale, x >= 0.
    """
    scale = Fraction(scale)
    if not isinstance(x, Dyadic):
        return quantize_down(scale * x, bits)
    if scale < 0 or x.m < 0:
        raise ValueError("scaled_floor expects nonnegative amounts")
    t = scale.numerator * x.m
    if t == 0:
        return Dyadic(0)
    den = scale.denominator
    shift = bits - t.bit_length() + den.bit_length() + x.e
    if shift >= 0:
        j = x.e - shift
        num = t >> j if j > 0 else t << -j
        m = num // den
    else:
        m = t // (den << (x.e - shift))
    return quantize_down(Dyadic(m, shift), bits)


def scaled_ceil(scale: Fraction, x: Fraction | Dyadic, bits: int = 96) -> Fraction | Dyadic:
    """Dyadic ceiling of scale*x on the same relative grid as scaled_floor."""
    scale = Fraction(scale)
    if not isinstance(x, Dyadic):
        p = scale * x
        if p < 0:
            raise ValueError("scaled_ceil expects nonnegative amounts")
        if p == 0:
            return Fraction(0)
        n, d = p.numerator, p.denominator
        shift = bits - (n.bit_length() - d.bit_length())
        if shift >= 0:
            m = -((-n << shift) // d)
            return Fraction(m, 1 << shift)
        m = -((-n) // (d << -shift))
        return Fraction(m << -shift)
    if scale < 0 or x.m < 0:
        raise ValueError("scaled_ceil expects nonnegative amounts")
    t = scale.numerator * x.m
    if t == 0:
        return Dyadic(0)
    den = scale.denominator
    shift = bits - t.bit_length() + den.bit_length() + x.e
    if shift >= 0:
        j = x.e - shift
        num = -((-t) >> j) if j > 0 else t << -j
        m = -((-num) // den)
    else:
        m = -((-t) // (den << (x.e - shift)))
    return Dyadic(m, shift)


@dataclass(frozen=True)
class BudgetRatio:
    """A Max budget ratio r in [0, 1] with its odds form nu = r/(1-r)."""

    r: Fraction

    def __post_init__(self) -> None:
        r = Fraction(self.r)
        if not 0 <= r <= 1:
            raise ValueError(f"ratio must lie in [0, 1], got {r}")
        object.__setattr__(self, "r", r)

    @property
    def nu(self) -> Fraction:
        if self.r == 1:
            raise ZeroDivisionError("nu is infinite at r = 1")
        return self.r / (1 - self.r)

    @classmethod
    def from_nu(cls, nu: Fraction) -> "BudgetRatio":
        nu = Fraction(nu)
        if nu < 0:
            raise ValueError(f"nu must be nonnegative, got {nu}")
        return cls(nu / (1 + nu))

    @classmethod
    def parse(cls, text: str) -> "BudgetRatio":
        return cls(parse_rational(text))

    def __str__(self) -> str:
        return format_rational(self.r)

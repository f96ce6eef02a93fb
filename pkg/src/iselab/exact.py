"""Exact constants of the form q * 2**(h/2) * pi**(p/2).

Rationals are plain :class:`fractions.Fraction` values.  Every moment of
eta and S is a rational multiple of a half-integer power of 2, possibly
times sqrt(pi), so that is the only irrational structure carried here.
Decimal output goes through rigorous integer enclosures of pi and square
roots, never through floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

__all__ = [
    "ExactConstant",
    "RationalInterval",
    "half_gamma",
    "pi_bounds",
    "to_decimal",
]


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        if isinstance(x, RationalInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def issubset(self, other: "RationalInterval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __mul__(self, other: "RationalInterval") -> "RationalInterval":
        if not isinstance(other, RationalInterval):
            other = RationalInterval(other, other)
        products = [a * b for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def __add__(self, other: "RationalInterval") -> "RationalInterval":
        if not isinstance(other, RationalInterval):
            other = RationalInterval(other, other)
        return RationalInterval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __repr__(self):
        return f"RationalInterval({float(self.lo)!r}, {float(self.hi)!r})"


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True, eq=False)
class ExactConstant:
    """The real number ``q * 2**(two_half_exp/2) * pi**(pi_half_exp/2)``.

    The constructor normalizes, so ``two_half_exp`` ends up in {0, 1} with
    the even part of the power of two folded into ``q``, and zero is always
    stored as ``(0, 0, 0)``.  With that canonical form two constants are
    equal exactly when their three fields are equal; this relies on 1,
    sqrt(2), sqrt(pi), sqrt(2 pi) being linearly independent over Q.
    """

    q: Fraction
    two_half_exp: int = 0
    pi_half_exp: int = 0

    def __post_init__(self):
        q = _as_fraction(self.q)
        h = int(self.two_half_exp)
        p = int(self.pi_half_exp)
        if p not in (0, 1):
            raise ValueError("pi_half_exp must be 0 or 1")
        if q == 0:
            h = p = 0
        else:
            # 2**(h/2) = 2**(h//2) * 2**((h%2)/2)
            whole, h = divmod(h, 2)
            q = q * Fraction(2) ** whole
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "two_half_exp", h)
        object.__setattr__(self, "pi_half_exp", p)

    @classmethod
    def rational(cls, q) -> "ExactConstant":
        return cls(_as_fraction(q))

    def normalize(self) -> "ExactConstant":
        return ExactConstant(self.q, self.two_half_exp, self.pi_half_exp)

    @property
    def is_rational(self) -> bool:
        return self.two_half_exp == 0 and self.pi_half_exp == 0

    def _coerce(self, other):
        if isinstance(other, ExactConstant):
            return other
        return ExactConstant(_as_fraction(other))

    def __mul__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        p = self.pi_half_exp + other.pi_half_exp
        q = self.q * other.q
        if p == 2:
            raise ValueError("product leaves the sqrt(pi) field: pi**1 is not representable")
        return ExactConstant(q, self.two_half_exp + other.two_half_exp, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if other.q == 0:
            raise ZeroDivisionError("division by exact zero")
        p = self.pi_half_exp - other.pi_half_exp
        if p < 0:
            raise ValueError("quotient leaves the sqrt(pi) field: 1/sqrt(pi) is not representable")
        return ExactConstant(self.q / other.q, self.two_half_exp - other.two_half_exp, p)

    def __rtruediv__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return other / self

    def __neg__(self):
        return ExactConstant(-self.q, self.two_half_exp, self.pi_half_exp)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return (self.q, self.two_half_exp, self.pi_half_exp) == (
            other.q,
            other.two_half_exp,
            other.pi_half_exp,
        )

    def __hash__(self):
        if self.is_rational:
            return hash(self.q)
        return hash((self.q, self.two_half_exp, self.pi_half_exp))

    def __bool__(self):
        return self.q != 0

    def sign(self) -> int:
        return (self.q > 0) - (self.q < 0)

    def log(self) -> float:
        """Natural log of |value|; usable when the float value would overflow."""
        if self.q == 0:
            return -math.inf
        q = abs(self.q)
        return (
            math.log(q.numerator)
            - math.log(q.denominator)
            + self.two_half_exp * math.log(2) / 2
            + self.pi_half_exp * math.log(math.pi) / 2
        )

    def __float__(self):
        if self.q == 0:
            return 0.0
        try:
            value = float(self.q)
        except OverflowError:
            value = 0.0
        if value == 0.0 or math.isinf(value):
            return self.sign() * math.exp(self.log())
        return value * math.sqrt(2.0) ** self.two_half_exp * math.sqrt(math.pi) ** self.pi_half_exp

    def interval(self, bits: int = 64) -> RationalInterval:
        """Rational enclosure of the value with width about |q| * 2**-bits."""
        lo, hi = _surd_bounds(self.two_half_exp, self.pi_half_exp, bits)
        scale = Fraction(1, 1 << bits)
        a, b = self.q * lo * scale, self.q * hi * scale
        return RationalInterval(min(a, b), max(a, b))

    def __str__(self):
        return self.to_string()

    def to_string(self) -> str:
        """Canonical text form such as ``7/5``, ``√(π/8)`` or ``-√18``.

        Irrational values are written as a signed square root of their
        (rational times pi) square, which is unique for the canonical form.
        """
        if self.is_rational:
            return str(self.q)
        sq = self.q * self.q * (2 if self.two_half_exp else 1)
        sign = "-" if self.q < 0 else ""
        num, den = sq.numerator, sq.denominator
        if self.pi_half_exp:
            top = "π" if num == 1 else f"{num}π"
        else:
            top = str(num)
        body = top if den == 1 else f"{top}/{den}"
        if den == 1 and (body.isdigit() or body == "π"):
            return f"{sign}√{body}"
        return f"{sign}√({body})"

    def __repr__(self):
        return (
            f"ExactConstant({self.q}, two_half_exp={self.two_half_exp}, "
            f"pi_half_exp={self.pi_half_exp})"
        )


SQRT_PI = ExactConstant(1, 0, 1)


def half_gamma(two_x: int) -> ExactConstant:
    """Gamma(two_x / 2) for a positive integer ``two_x``, exactly.

    >>> str(half_gamma(9))
    '√(11025π/256)'
    >>> half_gamma(9) == ExactConstant(Fraction(105, 16), 0, 1)
    True
    """
    if int(two_x) != two_x or two_x < 1:
        raise ValueError(f"half_gamma needs a positive integer, got {two_x!r}")
    two_x = int(two_x)
    m, odd = divmod(two_x, 2)
    if not odd:
        return ExactConstant(math.factorial(m - 1))
    # Gamma(m + 1/2) = (2m)! / (4**m m!) * sqrt(pi)
    return ExactConstant(Fraction(math.factorial(2 * m), 4**m * math.factorial(m)), 0, 1)


def _arctan_inv_fixed(x: int, one: int) -> tuple[int, int]:
    """Fixed-point arctan(1/x)*one, with a bound on the absolute error (units)."""
    total = 0
    power = one // x
    x2 = x * x
    k = 0
    terms = 0
    while power:
        term = power // (2 * k + 1)
        total = total - term if k % 2 else total + term
        power //= x2
        k += 1
        terms += 1
    # each floor loses < 1 unit twice per term; the dropped tail is < 1 unit
    return total, 2 * terms + 2


def pi_bounds(bits: int) -> tuple[int, int]:
    """Integers lo, hi with lo <= pi * 2**bits <= hi (Machin's formula)."""
    guard = 16
    one = 1 << (bits + guard)
    a, ea = _arctan_inv_fixed(5, one)
    b, eb = _arctan_inv_fixed(239, one)
    approx = 16 * a - 4 * b
    err = 16 * ea + 4 * eb
    lo = (approx - err) >> guard
    hi = -((-(approx + err)) >> guard)
    return lo, hi


def _surd_bounds(h: int, p: int, bits: int) -> tuple[int, int]:
    """Bounds lo <= sqrt(2**h * pi**p) * 2**bits <= hi with h, p in {0, 1}."""
    if h == 0 and p == 0:
        return 1 << bits, 1 << bits
    if p == 0:
        target = 2 << (2 * bits)
        r = math.isqrt(target)
        return r, r if r * r == target else r + 1
    plo, phi = pi_bounds(bits)
    mult = 2 if h else 1
    lo = math.isqrt(mult * plo << bits)
    hi_sq = mult * phi << bits
    hi = math.isqrt(hi_sq)
    if hi * hi < hi_sq:
        hi += 1
    return lo, hi


def to_decimal(c: ExactConstant, digits: int) -> tuple[str, Fraction]:
    """Decimal string of ``c`` with ``digits`` places and its error bound.

    The returned bound is rigorous and strictly below ``10**-digits``.

    >>> to_decimal(ExactConstant(Fraction(7, 5)), 3)[0]
    '1.400'
    """
    if digits < 0 or digits > 10**4:
        raise ValueError("digits must lie in [0, 10**4]")
    if not isinstance(c, ExactConstant):
        c = ExactConstant(_as_fraction(c))
    scale10 = 10**digits
    if c.is_rational:
        enclosure = RationalInterval(c.q, c.q)
    else:
        qmag = abs(c.q)
        extra = max(0, qmag.numerator.bit_length() - qmag.denominator.bit_length() + 1)
        bits = math.ceil(digits * math.log2(10)) + extra + 8
        enclosure = c.interval(bits)
    mid = enclosure.midpoint
    n = math.floor(mid * scale10 + Fraction(1, 2))
    err = abs(Fraction(n, scale10) - mid) + enclosure.width / 2
    if err >= Fraction(1, scale10):
        raise ArithmeticError("enclosure too wide; increase working precision")
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), scale10)
    text = f"{sign}{whole}"
    if digits:
        text += "." + str(frac).zfill(digits)
    return text, err

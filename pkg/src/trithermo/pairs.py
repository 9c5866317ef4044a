"""Representations of a point (alpha, beta).

Three flavours are supported:

* :class:`RationalPair` -- exact rationals.
* :class:`RealPair` -- a certified enclosure of a real pair: each coordinate
  is an :class:`Interval` with rational endpoints, plus the number of bits
  the enclosure is good to.  Named constants carry a callback that
  recomputes them at higher precision.
* :class:`DigitPair` -- a pair known only through a prefix of its triangle
  sequence; it is turned into a real enclosure on demand.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import OutOfDomain, PrecisionExhausted

Number = Union[int, Fraction]


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with exact rational endpoints.

    Arithmetic is exact; ``round_out`` snaps endpoints outward to a dyadic
    grid so repeated operations do not blow up the size of the fractions.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Number) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @classmethod
    def around(cls, center: Number, radius: Number) -> "Interval":
        center, radius = Fraction(center), Fraction(radius)
        return cls(center - radius, center + radius)

    @staticmethod
    def _lift(other) -> "Interval":
        return other if isinstance(other, Interval) else Interval.point(other)

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def rad(self) -> Fraction:
        return (self.hi - self.lo) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other):
        o = self._lift(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.lo <= 0 <= o.hi:
            raise PrecisionExhausted("division by an interval containing zero")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def sign(self) -> int:
        """Certified sign; raises when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        raise PrecisionExhausted(f"sign of [{float(self.lo)}, {float(self.hi)}] is undecided")

    def floor(self) -> int:
        """Certified floor; raises unless both endpoints share it."""
        a, b = math.floor(self.lo), math.floor(self.hi)
        if a != b:
            raise PrecisionExhausted(f"floor of [{float(self.lo)}, {float(self.hi)}] is undecided")
        return a

    def round_out(self, bits: int) -> "Interval":
        scale = 1 << bits
        lo = Fraction(math.floor(self.lo * scale), scale)
        hi = Fraction(math.ceil(self.hi * scale), scale)
        return Interval(lo, hi)


@dataclass(frozen=True)
class RationalPair:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))

    @property
    def exact(self) -> bool:
        return True

    def in_triangle(self) -> bool:
        return 1 >= self.alpha >= self.beta >= 0

    def __str__(self) -> str:
        return f"{self.alpha},{self.beta}"


@dataclass(frozen=True)
class RealPair:
    alpha: Interval
    beta: Interval
    bits: int
    label: str = ""
    source: Optional[Callable[[int], "RealPair"]] = field(default=None, compare=False, repr=False)

    @property
    def exact(self) -> bool:
        return False

    @classmethod
    def from_values(cls, alpha: Number, beta: Number, bits: int, label: str = "") -> "RealPair":
        """Center values known to within 2**-bits in each coordinate."""
        r = Fraction(1, 1 << bits)
        return cls(Interval.around(alpha, r), Interval.around(beta, r), bits, label)

    def refined(self, bits: int) -> "RealPair":
        """The same real pair to at least ``bits`` bits, when that is possible."""
        if self.source is None or bits <= self.bits:
            return self
        return self.source(bits)

    def in_triangle(self) -> bool:
        """False only when the enclosure certainly misses the closed triangle."""
        a, b = self.alpha, self.beta
        return not (a.lo > 1 or b.hi < 0 or b.lo > a.hi)

    def __str__(self) -> str:
        return self.label or f"{float(self.alpha.mid)},{float(self.beta.mid)}"


@dataclass(frozen=True)
class DigitPair:
    """A pair given by (a prefix of) its triangle sequence."""

    digits: tuple[int, ...]
    depth: Optional[int] = None

    @property
    def exact(self) -> bool:
        return False

    def enclosure(self):
        from .construct import pair_from_digits

        n = len(self.digits) if self.depth is None else min(self.depth, len(self.digits))
        return pair_from_digits(self.digits[:n])

    def to_real(self) -> RealPair:
        """Bounding box of the deepest nested triangle."""
        enc = self.enclosure()
        us = [p.u for p in enc.vertices]
        vs = [p.v for p in enc.vertices]
        box_a = Interval(min(us), max(us))
        box_b = Interval(min(vs), max(vs))
        width = max(box_a.width, box_b.width)
        bits = max(0, -math.floor(math.log2(width))) if width > 0 else 1 << 20
        return RealPair(box_a, box_b, bits, label=f"digits:{len(enc.digits)}")

    def __str__(self) -> str:
        return "digits:" + ",".join(map(str, self.digits))


PairRepr = Union[RationalPair, RealPair, DigitPair]


def as_interval_pair(pair: PairRepr) -> RealPair:
    if isinstance(pair, RealPair):
        return pair
    if isinstance(pair, DigitPair):
        return pair.to_real()
    return RealPair(Interval.point(pair.alpha), Interval.point(pair.beta), 1 << 20)


def _cubic_root_bracket(bits: int) -> tuple[int, int]:
    """Integer Q with f(Q/2^b) < 0 < f((Q+1)/2^b), f(t) = t^3 + t - 1."""
    scale = 1 << bits

    def f(n: int) -> int:  # f(n / scale) * scale**3
        return n * n * n + n * scale * scale - scale ** 3

    lo, hi = 0, scale
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def cubic_fixed_point(bits: int = 512) -> RealPair:
    """(q, q^2) with q the real root of q^3 + q - 1, to ``bits`` bits.

    This is the fixed point of the triangle map inside the first sector.
    """
    lo, hi = _cubic_root_bracket(bits)
    scale = 1 << bits
    q = Interval(Fraction(lo, scale), Fraction(hi, scale))
    q2 = Interval(q.lo * q.lo, q.hi * q.hi).round_out(bits + 2)
    return RealPair(q, q2, bits, label="cubic-fixed-point", source=cubic_fixed_point)


NAMED_PAIRS: dict[str, Callable[[int], RealPair]] = {
    "cubic-fixed-point": cubic_fixed_point,
}

_DECIMAL = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+[eE][+-]?\d+|\d+\.\d*[eE][+-]?\d+)$")


def parse_pair(text: str, input_bits: Optional[int] = None, precision: int = 512) -> PairRepr:
    """Parse "3/4,1/2", "0.68,0.46" (needs ``input_bits``) or a named constant."""
    text = text.strip()
    if text in NAMED_PAIRS:
        return NAMED_PAIRS[text](precision)
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'alpha,beta', got {text!r}")
    if any(_DECIMAL.match(p) for p in parts):
        if input_bits is None:
            raise ValueError("decimal pairs need an explicit input precision (--input-bits)")
        a, b = (Fraction(p) for p in parts)
        return RealPair.from_values(a, b, input_bits, label=text)
    return RationalPair(Fraction(parts[0]), Fraction(parts[1]))


def check_domain(pair: PairRepr) -> None:
    if isinstance(pair, DigitPair):
        return
    if not pair.in_triangle():
        raise OutOfDomain(f"({pair}) is not in the triangle 1 >= alpha >= beta >= 0")

"""The triangle map T and its digit sequence.

The triangle is {1 >= x >= y > 0}, cut into sectors

    D_k = {(x, y) : 1 - x - k*y >= 0 > 1 - x - (k+1)*y},

and T(x, y) = (y/x, (1 - x - k*y)/x) on D_k.  Digits are numbered from
a_1: the first digit is the sector of the starting point itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionExhausted, Terminated
from .pairs import DigitPair, PairRepr, RationalPair, RealPair, check_domain


@dataclass(frozen=True)
class DigitSequence:
    digits: tuple[int, ...]
    terminated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(a) for a in self.digits))
        if any(a < 0 for a in self.digits):
            raise ValueError("triangle-sequence digits are nonnegative")

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def to_json(self) -> list[str]:
        return [str(a) for a in self.digits]


def _as_digits(digits) -> tuple[int, ...]:
    return tuple(digits.digits if isinstance(digits, DigitSequence) else digits)


def sector_index(pair: PairRepr) -> int:
    """The k with pair in D_k."""
    if isinstance(pair, DigitPair):
        if not pair.digits:
            raise PrecisionExhausted("no digits known", certified=())
        return pair.digits[0]
    check_domain(pair)
    if isinstance(pair, RationalPair):
        if pair.beta == 0:
            raise Terminated("beta = 0")
        return math.floor((1 - pair.alpha) / pair.beta)
    if pair.beta.is_exact() and pair.beta.lo == 0:
        raise Terminated("beta = 0")
    if pair.beta.lo <= 0:
        raise PrecisionExhausted("cannot certify beta > 0")
    return ((1 - pair.alpha) / pair.beta).floor()


def apply_T(pair: PairRepr) -> PairRepr:
    k = sector_index(pair)
    if isinstance(pair, DigitPair):
        return DigitPair(pair.digits[1:])
    a, b = pair.alpha, pair.beta
    if isinstance(pair, RationalPair):
        return RationalPair(b / a, (1 - a - k * b) / a)
    guard = pair.bits + 16
    na = (b / a).round_out(guard)
    nb = ((1 - a - k * b) / a).round_out(guard)
    # the image lies in the triangle, so clip what interval slop added
    na = type(na)(max(na.lo, Fraction(0)), min(na.hi, Fraction(1)))
    nb = type(nb)(max(nb.lo, Fraction(0)), min(nb.hi, na.hi))
    return RealPair(na, nb, pair.bits, pair.label)


def orbit(pair: PairRepr, n: int) -> list[PairRepr]:
    """[pair, T(pair), ..., T^n(pair)], stopping early at termination."""
    out = [pair]
    for _ in range(n):
        try:
            out.append(apply_T(out[-1]))
        except Terminated:
            break
    return out


def _beta_is_zero(pair: PairRepr) -> bool:
    if isinstance(pair, RationalPair):
        return pair.beta == 0
    if isinstance(pair, RealPair):
        return pair.beta.is_exact() and pair.beta.lo == 0
    return False


def triangle_sequence(pair: PairRepr, n: int) -> DigitSequence:
    """The first ``n`` digits of the triangle sequence.

    Returns a shorter, ``terminated`` sequence when the orbit lands on
    beta = 0.  For real pairs an undecidable comparison raises
    :class:`PrecisionExhausted` whose ``certified`` attribute holds the
    digits obtained so far.
    """
    if isinstance(pair, DigitPair):
        if len(pair.digits) < n:
            raise PrecisionExhausted(
                f"only {len(pair.digits)} digits are known", certified=DigitSequence(pair.digits)
            )
        return DigitSequence(pair.digits[:n])
    check_domain(pair)
    digits: list[int] = []
    p = pair
    for _ in range(n):
        if _beta_is_zero(p):
            return DigitSequence(digits, terminated=True)
        try:
            k = sector_index(p)
            p = apply_T(p)
        except PrecisionExhausted as exc:
            raise PrecisionExhausted(
                f"{exc} after {len(digits)} certified digits", certified=DigitSequence(digits)
            ) from None
        digits.append(k)
    # the orbit may land on beta = 0 exactly at step n
    return DigitSequence(digits, terminated=_beta_is_zero(p))

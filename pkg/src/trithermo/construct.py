"""Pairs built from prescribed triangle sequences, and Theorem-1 digits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import gmpy2
from gmpy2 import mpfr

from .convergents import nested_triangle_vectors
from .errors import DegenerateTriangle, DepthOverflow, ZeroLeadCoordinate
from .linalg import IntMat3, IntVec3, RationalPoint2, hat, projective_triangle_area
from .pairs import RationalPair
from .trimap import DigitSequence, _as_digits, triangle_sequence


@dataclass(frozen=True)
class Enclosure:
    digits: tuple[int, ...]
    vectors: tuple[IntVec3, IntVec3, IntVec3]
    vertices: tuple[RationalPoint2, RationalPoint2, RationalPoint2]
    representative: RationalPoint2

    @property
    def depth(self) -> int:
        return len(self.digits)

    @property
    def pair(self) -> RationalPair:
        return RationalPair(*self.representative)

    def area(self) -> Fraction:
        """Projective area (twice the Euclidean area) of the enclosing triangle."""
        return abs(projective_triangle_area(IntMat3.from_columns(*self.vectors)))

    def contains(self, point) -> bool:
        """Closed-triangle membership test for a planar rational point."""
        (x1, y1), (x2, y2), (x3, y3) = self.vertices
        px, py = point

        def side(ax, ay, bx, by):
            return (bx - ax) * (py - ay) - (by - ay) * (px - ax)

        s = (side(x1, y1, x2, y2), side(x2, y2, x3, y3), side(x3, y3, x1, y1))
        return all(v >= 0 for v in s) or all(v <= 0 for v in s)


def pair_from_digits(digits) -> Enclosure:
    """The nested triangle for ``digits`` with a rational interior representative.

    The representative is the Farey sum of the three vertex vectors, which
    lies strictly inside the triangle; its own triangle sequence is checked
    against ``digits``.
    """
    ds = _as_digits(digits)
    if not ds:
        raise ValueError("need at least one digit")
    try:
        vectors = nested_triangle_vectors(ds)
        vertices = tuple(hat(v) for v in vectors)
        u, v, w = vectors
        rep = hat(u + v + w)
    except ZeroLeadCoordinate as exc:
        raise DegenerateTriangle(str(exc)) from exc
    got = triangle_sequence(RationalPair(*rep), len(ds))
    if got.digits != ds:
        raise DegenerateTriangle(f"representative has digits {got.digits}, expected {ds}")
    return Enclosure(ds, vectors, vertices, rep)  # type: ignore[arg-type]


def refine(enclosure: Enclosure, extra_digits) -> Enclosure:
    extra = _as_digits(extra_digits)
    if not extra:
        return enclosure
    return pair_from_digits(enclosure.digits + extra)


def inverse_T(point, k: int) -> RationalPair:
    """The unique preimage of ``point`` under T inside the sector D_k.

    Solves (x', y') = (b/a, (1 - a - k b)/a) for (a, b).
    """
    x, y = (Fraction(c) for c in point)
    a = 1 / (1 + k * x + y)
    return RationalPair(a, x * a)


# Theorem-1 digit growth ---------------------------------------------------

def _f_linear(m):
    return mpfr(m)


def _f_log(m):
    return gmpy2.log(mpfr(m) + 1)


def _f_constant(m):
    return mpfr(1)


F_PRESETS: dict[str, Callable] = {
    "linear": _f_linear,
    "log": _f_log,
    "constant": _f_constant,
}


@dataclass(frozen=True)
class Theorem1Config:
    """Parameters of the Theorem-1 construction.

    ``f`` is a preset name from :data:`F_PRESETS` or a callable returning a
    float (treated as exact).  ``m_max`` is the number of levels; digits
    a_1 .. a_{m_max+1} are generated.
    """

    k: Union[float, Fraction] = 1
    f: Union[str, Callable[[int], float]] = "linear"
    m_max: int = 2
    a1: int = 3
    bit_budget: int = 1 << 20

    def __post_init__(self):
        if self.a1 <= 2:
            raise ValueError("a_1 must be an integer greater than two")
        if self.k <= 0:
            raise ValueError("k must be positive")
        if isinstance(self.f, str) and self.f not in F_PRESETS:
            raise ValueError(f"unknown f preset {self.f!r}; choose from {sorted(F_PRESETS)}")

    @property
    def f_name(self) -> str:
        return self.f if isinstance(self.f, str) else getattr(self.f, "__name__", "custom")

    @property
    def f_increasing(self) -> bool:
        """Whether f meets the hypothesis (strictly increasing to infinity)."""
        return self.f_name in ("linear", "log") or not isinstance(self.f, str)


def _eval_f(cfg: Theorem1Config, m: int):
    if isinstance(cfg.f, str):
        return F_PRESETS[cfg.f](m)
    return mpfr(Fraction(cfg.f(m)))


def growth_exponent_bounds(cfg: Theorem1Config, m: int, N: int, precision: int = 128):
    """Certified [lo, hi] for f(m) * N**k, using directed rounding."""
    out = []
    for rnd in (gmpy2.RoundDown, gmpy2.RoundUp):
        with gmpy2.context(gmpy2.get_context(), precision=precision, round=rnd):
            k = mpfr(Fraction(cfg.k))
            out.append(_eval_f(cfg, m) * mpfr(N) ** k)
    return out[0], out[1]


def exp_floor_plus_one(lo, hi) -> int:
    """An integer a > exp(hi).

    When exp(lo) and exp(hi) share an integer part this is floor(exp(x)) + 1
    for every x in [lo, hi].
    """
    prec = int(float(hi) * 1.4426950408889634) + 96
    for _ in range(6):
        with gmpy2.context(gmpy2.get_context(), precision=prec, round=gmpy2.RoundUp):
            upper = int(gmpy2.floor(gmpy2.exp(hi)))
        with gmpy2.context(gmpy2.get_context(), precision=prec, round=gmpy2.RoundDown):
            lower = int(gmpy2.floor(gmpy2.exp(lo)))
        if lower == upper or lo != hi:
            return upper + 1
        prec *= 2
    return upper + 1


def theorem1_digits(cfg: Theorem1Config) -> DigitSequence:
    """a_1, ..., a_{m_max+1} with a_{m+1} = floor(exp(f(m+1) N_m^k)) + 1.

    N_m = a_1 + ... + a_m + m.  Raises :class:`DepthOverflow` (carrying the
    digits built so far) when a digit would exceed ``cfg.bit_budget`` bits.
    """
    digits = [cfg.a1]
    for m in range(1, cfg.m_max + 1):
        N = sum(digits) + m
        _, rough = growth_exponent_bounds(cfg, m + 1, N)
        if gmpy2.is_infinite(rough):
            bits = -1
        else:
            bits = int(gmpy2.ceil(rough / gmpy2.log(2))) + 1
        if bits < 0 or bits > cfg.bit_budget:
            size = "unbounded" if bits < 0 else (str(bits) if bits < 10 ** 9 else f"about 2^{bits.bit_length()}")
            raise DepthOverflow(
                f"a_{m + 1} needs {size} bits (budget {cfg.bit_budget})",
                digits=digits,
                needed_bits=bits,
            )
        # enough bits that exp(hi) - exp(lo) stays below one unit
        lo, hi = growth_exponent_bounds(cfg, m + 1, N, precision=bits + 128)
        digits.append(exp_floor_plus_one(lo, hi))
    return DigitSequence(digits)


def level_lengths(digits) -> list[int]:
    """[N_1, N_2, ...] with N_m = a_1 + ... + a_m + m (the word length)."""
    out, total = [], 0
    for m, a in enumerate(_as_digits(digits), start=1):
        total += a
        out.append(total + m)
    return out

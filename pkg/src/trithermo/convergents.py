"""Convergent vectors C_k, errors d_k, the vectors X_k and nested triangles.

Indexing: the seeds are C_{-3}, C_{-2}, C_{-1} = e1, e2, e3 and digit a_{j+1}
produces C_j = C_{j-3} - C_{j-2} - a_{j+1} C_{j-1}.  So m digits give
C_{-3}..C_{m-1}, and the word (1^{a_1}, 0, ..., 1^{a_m}, 0) has columns
(C_{m-3}, C_{m-2}, C_{m-1}).

X_j = C_j x C_{j+1}.  Although C_m needs the unknown digit a_{m+1}, the cross
product C_{m-1} x C_m does not depend on it, so m digits determine
X_{-3}..X_{m-1}.  The digit-a_m triangle then has vertices
hat(X_{m-2}), hat(X_{m-1}) and the Farey sum of X_{m-1} and X_{m-3}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PrecisionExhausted, ZeroX
from .linalg import E1, E2, E3, IntMat3, IntVec3, RationalPoint2, farey_sum, hat, hs_product, word_product
from .pairs import DigitPair, Interval, PairRepr, RationalPair, as_interval_pair
from .trimap import DigitSequence, _as_digits

OFFSET = 3  # list position of index 0


def c_vectors(digits) -> list[IntVec3]:
    """[C_{-3}, ..., C_{m-1}] for m digits."""
    C = [E1, E2, E3]
    for a in _as_digits(digits):
        C.append(C[-3] - C[-2] - C[-1].scale(a))
    return C


def x_vectors(digits) -> list[IntVec3]:
    """[X_{-3}, ..., X_{m-1}] computed by cross products."""
    C = c_vectors(digits)
    X = [C[i].cross(C[i + 1]) for i in range(len(C) - 1)]
    # C_m = C_{m-3} - C_{m-2} - a C_{m-1}; the a-term drops out of the cross product
    X.append(C[-1].cross(C[-3] - C[-2]))
    return X


def x_vectors_by_recurrence(digits) -> list[IntVec3]:
    """Same as :func:`x_vectors` via X_{j+1} = X_j + a X_{j-1} + X_{j-2},
    a being the digit that produces C_{j+1}."""
    ds = _as_digits(digits)
    X = [IntVec3(0, 0, 1), IntVec3(1, 0, 0), IntVec3(1, 1, 0)]
    for a in ds:
        X.append(X[-1] + X[-2].scale(a) + X[-3])
    return X


def _unit_row(pair: PairRepr):
    if isinstance(pair, RationalPair):
        return (Fraction(1), pair.alpha, pair.beta)
    real = as_interval_pair(pair)
    return (Interval.point(1), real.alpha, real.beta)


def d_values(pair: PairRepr, digits) -> list:
    """[d_{-3}, ..., d_{m-1}] with d_k = (1, alpha, beta) . C_k.

    Exact fractions for rational pairs, intervals otherwise.
    """
    row = _unit_row(pair)
    return [c.dot(row) for c in c_vectors(digits)]


def digits_from_d(pair: PairRepr, n: int) -> DigitSequence:
    """Digits from the d-recurrence alone.

    a_{j+1} is the nonnegative integer with
    d_{j-3} - d_{j-2} - a d_{j-1} >= 0 > d_{j-3} - d_{j-2} - (a+1) d_{j-1},
    and the new d_j is the left-hand side.
    """
    if isinstance(pair, DigitPair):
        pair = as_interval_pair(pair)
    d = list(_unit_row(pair))
    exact = isinstance(pair, RationalPair)
    digits: list[int] = []
    for _ in range(n + 1):
        last = d[-1]
        if exact:
            if last == 0:
                return DigitSequence(digits, terminated=True)
        elif last.is_exact() and last.lo == 0:
            return DigitSequence(digits, terminated=True)
        if len(digits) == n:
            break
        try:
            num = d[-3] - d[-2]
            a = int((num / last).__floor__()) if exact else (num / last).floor()
        except PrecisionExhausted as exc:
            raise PrecisionExhausted(str(exc), certified=DigitSequence(digits)) from None
        if a < 0:
            raise PrecisionExhausted("negative digit: point left the triangle", certified=DigitSequence(digits))
        digits.append(a)
        nxt = num - a * last
        if not exact:
            nxt = nxt.round_out(pair.bits + 32)
        d.append(nxt)
    return DigitSequence(digits)


@dataclass(frozen=True)
class ConvergentTable:
    digits: DigitSequence
    C: tuple[IntVec3, ...]
    d: tuple
    X: tuple[IntVec3, ...]

    def c(self, k: int) -> IntVec3:
        return self.C[k + OFFSET]

    def dk(self, k: int):
        return self.d[k + OFFSET]

    def x(self, k: int) -> IntVec3:
        return self.X[k + OFFSET]

    @property
    def levels(self) -> int:
        return len(self.digits)


def convergent_table(pair: PairRepr, digits) -> ConvergentTable:
    ds = digits if isinstance(digits, DigitSequence) else DigitSequence(_as_digits(digits))
    return ConvergentTable(ds, tuple(c_vectors(ds)), tuple(d_values(pair, ds)), tuple(x_vectors(ds)))


def nested_triangle_vectors(digits) -> tuple[IntVec3, IntVec3, IntVec3]:
    """Integer vectors whose hat projections are the nested-triangle vertices."""
    ds = _as_digits(digits)
    if not ds:
        raise ValueError("need at least one digit")
    X = x_vectors(ds)
    top = len(X) - 1  # list position of X_{m-1}
    return (X[top - 1], X[top], X[top] + X[top - 2])


def nested_triangle(digits) -> tuple[RationalPoint2, RationalPoint2, RationalPoint2]:
    """Vertices of the triangle of points whose sequence starts with ``digits``."""
    ds = _as_digits(digits)
    if not ds:
        raise ValueError("need at least one digit")
    X = x_vectors(ds)
    return (hat(X[-2]), hat(X[-1]), farey_sum([X[-1], X[-3]]))


def lemma_bound(pair: PairRepr, digits, k: int):
    """(|d_k| * |x_{k+1}|, whether |d_k| <= 1/|x_{k+1}|).

    ``digits`` must reach level k+1, i.e. contain at least k+2 entries.
    For non-rational pairs the ratio is the upper end of its enclosure.
    """
    ds = _as_digits(digits)
    if len(ds) < k + 2:
        raise ValueError(f"level {k} needs {k + 2} digits, got {len(ds)}")
    table = convergent_table(pair, ds[: k + 2])
    x_next = table.x(k + 1).x
    if x_next == 0:
        raise ZeroX(f"x_{k + 1} = 0")
    ratio = abs(table.dk(k)) * abs(x_next)
    if isinstance(ratio, Interval):
        return ratio.hi, ratio.hi <= 1
    return ratio, ratio <= 1


def digit_word(digits) -> tuple[int, ...]:
    """The generator word (1^{a_1}, 0, 1^{a_2}, 0, ..., 1^{a_m}, 0)."""
    word: list[int] = []
    for a in _as_digits(digits):
        word.extend([1] * a)
        word.append(0)
    return tuple(word)


class IdentityCheck:
    def __init__(self, ok: bool, diagnostic: str = ""):
        self.ok = ok
        self.diagnostic = diagnostic

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"IdentityCheck(ok={self.ok}, {self.diagnostic!r})"


def word_column_identity(digits, pair: Optional[PairRepr] = None) -> IdentityCheck:
    """Check that the digit word's product has columns (C_{m-3}, C_{m-2}, C_{m-1}).

    With a rational ``pair`` also checks M*A^I == d_{m-1} numerically.
    """
    ds = _as_digits(digits)
    if not ds:
        raise ValueError("need at least one digit")
    A = word_product(digit_word(ds))
    C = c_vectors(ds)
    want = tuple(C[-3:])
    got = A.columns
    if got != want:
        return IdentityCheck(False, f"columns {got} != {want}")
    if pair is not None and isinstance(pair, RationalPair):
        lhs = hs_product(pair, A)
        rhs = C[-1].dot(_unit_row(pair))
        if lhs != rhs:
            return IdentityCheck(False, f"M*A = {lhs} but d = {rhs}")
    return IdentityCheck(True)


def unimodular_det(digits, k: int) -> int:
    """det of the matrix with columns X_k + X_{k-2}, X_{k-1}, X_k."""
    X = x_vectors(digits)
    Xk = lambda j: X[j + OFFSET]  # noqa: E731
    return IntMat3.from_columns(Xk(k) + Xk(k - 2), Xk(k - 1), Xk(k)).det()

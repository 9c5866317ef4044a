"""Exact integer 3x3 linear algebra for the triangle map.

Everything here works over Python's unbounded integers and
:class:`fractions.Fraction`; nothing is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import ZeroLeadCoordinate


class IntVec3(NamedTuple):
    x: int
    y: int
    z: int

    def __add__(self, other):  # type: ignore[override]
        return IntVec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other):
        return IntVec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def scale(self, c: int) -> "IntVec3":
        return IntVec3(c * self.x, c * self.y, c * self.z)

    def cross(self, other: "IntVec3") -> "IntVec3":
        a, b, c = self
        d, e, f = other
        return IntVec3(b * f - c * e, c * d - a * f, a * e - b * d)

    def dot(self, other: Sequence) -> object:
        return self.x * other[0] + self.y * other[1] + self.z * other[2]


E1 = IntVec3(1, 0, 0)
E2 = IntVec3(0, 1, 0)
E3 = IntVec3(0, 0, 1)


class RationalPoint2(NamedTuple):
    """A planar point (u, v) with exact rational coordinates."""

    u: Fraction
    v: Fraction

    def __str__(self) -> str:
        return f"({self.u}, {self.v})"


class IntMat3(NamedTuple):
    """Row-major 3x3 integer matrix."""

    rows: tuple[IntVec3, IntVec3, IntVec3]

    @classmethod
    def from_rows(cls, *rows: Iterable[int]) -> "IntMat3":
        return cls(tuple(IntVec3(*r) for r in rows))  # type: ignore[arg-type]

    @classmethod
    def from_columns(cls, *cols: Sequence[int]) -> "IntMat3":
        return cls.from_rows(*zip(*cols))

    @classmethod
    def identity(cls) -> "IntMat3":
        return cls((E1, E2, E3))

    def column(self, j: int) -> IntVec3:
        return IntVec3(self.rows[0][j], self.rows[1][j], self.rows[2][j])

    @property
    def columns(self) -> tuple[IntVec3, IntVec3, IntVec3]:
        return (self.column(0), self.column(1), self.column(2))

    def __matmul__(self, other: "IntMat3") -> "IntMat3":
        cols = other.columns
        return IntMat3(tuple(IntVec3(*(row.dot(c) for c in cols)) for row in self.rows))  # type: ignore[arg-type]

    def det(self) -> int:
        r0, r1, r2 = self.rows
        return r0.dot(r1.cross(r2))

    def max_abs_entry(self) -> int:
        return max(abs(v) for row in self.rows for v in row)


A0 = IntMat3.from_rows((0, 0, 1), (1, 0, -1), (0, 1, 0))
A1 = IntMat3.from_rows((1, 0, 0), (0, 1, 0), (-1, 0, 1))

# Smallest c with max|entry(A^I)| <= F_{N+c} for every word of length
# 1 <= N <= 14, found by exhaustive search (see tests/test_linalg.py).
FIBONACCI_OFFSET = 1


def generator(sigma: int) -> IntMat3:
    if sigma == 0:
        return A0
    if sigma == 1:
        return A1
    raise ValueError(f"generator index must be 0 or 1, got {sigma!r}")


def word_product(word: Iterable[int]) -> IntMat3:
    """Return A_{w1} A_{w2} ... A_{wN}; the empty word gives the identity."""
    out = IntMat3.identity()
    for sigma in word:
        out = out @ generator(sigma)
    return out


def hs_product(pair, A: IntMat3):
    """The product M*A = x + alpha*y + beta*z, (x, y, z) the third column of A.

    ``pair`` may be anything with ``alpha``/``beta`` attributes supporting
    arithmetic with ints (a rational pair gives an exact Fraction, a real
    pair gives an interval).
    """
    x, y, z = A.column(2)
    return x + pair.alpha * y + pair.beta * z


def hat(v: Sequence[int]) -> RationalPoint2:
    if v[0] == 0:
        raise ZeroLeadCoordinate(f"cannot project {tuple(v)}: lead coordinate is zero")
    return RationalPoint2(Fraction(v[1], v[0]), Fraction(v[2], v[0]))


def farey_sum(vs: Sequence[Sequence[int]]) -> RationalPoint2:
    if len(vs) not in (2, 3):
        raise ValueError("a Farey sum takes two or three vectors")
    total = (sum(v[0] for v in vs), sum(v[1] for v in vs), sum(v[2] for v in vs))
    return hat(total)


def projective_triangle_area(A: IntMat3) -> Fraction:
    """det(A) / (a11 a12 a13).

    This is twice the Euclidean area (up to sign) of the triangle whose
    vertices are the hat projections of the columns of ``A``.
    """
    a11, a12, a13 = A.rows[0]
    if a11 == 0 or a12 == 0 or a13 == 0:
        raise ZeroLeadCoordinate("every column needs a nonzero lead coordinate")
    return Fraction(A.det(), a11 * a12 * a13)


def step_columns(cols, sigma: int):
    """Right-multiply a matrix, given as its three columns, by A_sigma.

    A_0 sends (c1, c2, c3) to (c2, c3, c1 - c2) and A_1 sends it to
    (c1 - c3, c2, c3); this is the C_k recurrence read letter by letter.
    """
    c1, c2, c3 = cols
    if sigma == 0:
        return (c2, c3, c1 - c2)
    return (c1 - c3, c2, c3)


def third_column_weight_bound(n: int) -> int:
    """Upper bound on |y| + |z| over third columns of all words of length n.

    Runs the generator recurrence with every minus sign turned into a plus,
    taking componentwise maxima over both letters.
    """
    w = (0, 1, 1)  # |y| + |z| of e1, e2, e3
    for _ in range(n):
        c1, c2, c3 = w
        w = (max(c2, c1 + c3), max(c3, c2), max(c1 + c2, c3))
    return w[2]

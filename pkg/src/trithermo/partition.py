"""The partition sum Z_N(alpha, beta, s) over all 2**N generator words.

The engine never forms 3x3 products.  It carries the row vector
(1, alpha, beta) * A^prefix, scaled to integers: by the common denominator
for a rational pair, by 2**precision for a real one.  Appending A_0 maps the
row (r1, r2, r3) to (r2, r3, r1 - r2) and A_1 maps it to (r1 - r3, r2, r3), so
every step is one exact integer subtraction and the denominator of a word
is the third entry of its row.

Words are split into 2**b blocks by their first b letters, where b depends
on N only.  Each block is summed in lexicographic word order, then the
block sums are added in block order.  That grouping is the same for any
number of workers, so parallel runs reproduce serial ones bit for bit.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import gmpy2
from gmpy2 import mpfr

from .convergents import c_vectors, digit_word
from .errors import Pole
from .linalg import third_column_weight_bound
from .pairs import DigitPair, PairRepr, RationalPair, RealPair
from .trimap import _as_digits

BLOCK_LEAF_BITS = 14
EXACT_AUTO_MAX_N = 14
DEFAULT_PRECISION = 256
MAX_PRECISION = 8192
MAX_POLE_WORDS = 64
GUARD_BITS = 64  # extra fixed-point bits so input rounding stays below the output precision

Real = Union[Fraction, "mpfr"]


def as_exponent(s) -> Fraction:
    s = Fraction(s) if not isinstance(s, str) else Fraction(s)
    if s <= 0:
        raise ValueError("s must be positive")
    return s


def _ctx(precision: int):
    return gmpy2.context(gmpy2.get_context(), precision=precision, round=gmpy2.RoundToNearest)


@dataclass(frozen=True)
class ScaledRow:
    """(1, alpha, beta) times ``scale``, as integers, with an error radius.

    Real pairs use ``scale = 2**(precision + GUARD_BITS)``.

    ``radius`` bounds |true scaled coordinate - stored integer| for alpha
    and beta, in the same units.
    """

    w: tuple[int, int, int]
    scale: int
    radius: int
    exact: bool


def scaled_row(pair: PairRepr, precision: int) -> ScaledRow:
    if isinstance(pair, DigitPair):
        pair = pair.to_real()
    if isinstance(pair, RationalPair):
        q = math.lcm(pair.alpha.denominator, pair.beta.denominator)
        return ScaledRow((q, int(pair.alpha * q), int(pair.beta * q)), q, 0, True)
    S = 1 << (precision + GUARD_BITS)
    wa, wb = round(pair.alpha.mid * S), round(pair.beta.mid * S)
    rad = max(pair.alpha.rad, pair.beta.rad) * S + Fraction(1, 2)
    return ScaledRow((S, wa, wb), S, math.ceil(rad), False)


def _step(row, sigma):
    r1, r2, r3 = row
    return (r2, r3, r1 - r2) if sigma == 0 else (r1 - r3, r2, r3)


def _block_rows(row, n):
    """Third row entries of all 2**n extensions, in lexicographic order."""
    r1, r2, r3 = [row[0]], [row[1]], [row[2]]
    for level in range(n):
        size = 2 * len(r1)
        last = level == n - 1
        n3 = [None] * size
        n3[0::2] = [a - b for a, b in zip(r1, r2)]
        n3[1::2] = r3
        if not last:
            n1 = [None] * size
            n1[0::2] = r2
            n1[1::2] = [a - c for a, c in zip(r1, r3)]
            n2 = [None] * size
            n2[0::2] = r3
            n2[1::2] = r2
            r1, r2 = n1, n2
        r3 = n3
    return r3


def _word_bits(index: int, length: int) -> tuple[int, ...]:
    return tuple((index >> (length - 1 - i)) & 1 for i in range(length))


@dataclass(frozen=True)
class _Job:
    w: tuple[int, int, int]
    scale: int
    threshold: int
    N: int
    b: int
    block: int
    s: Fraction
    precision: int
    exact: bool


def _run_block(job: _Job):
    prefix = _word_bits(job.block, job.b)
    row = job.w
    for sigma in prefix:
        row = _step(row, sigma)
    rest = job.N - job.b
    r3 = _block_rows(row, rest)
    mags = [abs(r) for r in r3]
    low = min(mags)
    if low <= job.threshold:
        hits = [i for i, m in enumerate(mags) if m <= job.threshold][:MAX_POLE_WORDS]
        return None, low, [prefix + _word_bits(i, rest) for i in hits]
    if job.exact:
        counts = Counter(mags)
        p = job.s.numerator
        total = sum(Fraction(c, m ** p) for m, c in sorted(counts.items()))
        return total * job.scale ** p, low, None
    with _ctx(job.precision):
        S = mpfr(job.scale)
        if job.s.denominator == 1:
            p = job.s.numerator
            terms = [(S / m) ** p for m in mags]
        else:
            e = mpfr(job.s)
            terms = [(S / m) ** e for m in mags]
        return gmpy2.fsum(terms), low, None


@dataclass(frozen=True)
class PartitionResult:
    N: int
    s: Fraction
    value: object  # Fraction when exact, mpfr otherwise, None at a pole
    min_denom: object
    pole: bool
    precision_bits: int
    exact: bool = False
    pole_words: tuple[tuple[int, ...], ...] = ()

    @property
    def pole_word(self) -> Optional[tuple[int, ...]]:
        return self.pole_words[0] if self.pole_words else None

    def log_value(self):
        if self.pole:
            return None
        with _ctx(self.precision_bits):
            return gmpy2.log(mpfr(self.value))

    def normalized(self, k=1):
        """log(Z_N) / (s * N**k)."""
        if self.pole:
            return None
        with _ctx(self.precision_bits):
            denom = mpfr(self.s) * mpfr(self.N) ** mpfr(Fraction(k))
            return gmpy2.log(mpfr(self.value)) / denom


def default_workers() -> int:
    env = os.environ.get("TRITHERMO_THREADS")
    return int(env) if env else (os.cpu_count() or 1)


def _block_bits(N: int) -> int:
    return max(0, N - BLOCK_LEAF_BITS)


def z_value(
    pair: PairRepr,
    N: int,
    s,
    precision: int = DEFAULT_PRECISION,
    *,
    workers: int = 1,
    exact: Optional[bool] = None,
    allow_pole: bool = False,
    rerun: bool = True,
) -> PartitionResult:
    """Z_N(alpha, beta, s).

    ``exact=None`` picks exact rational arithmetic for a rational pair with
    integer ``s`` and N <= EXACT_AUTO_MAX_N.  A word whose denominator is zero,
    or not certified nonzero for a real pair, raises :class:`Pole` unless
    ``allow_pole`` is set, in which case the result carries ``pole=True``
    and the offending words (at most MAX_POLE_WORDS of them).
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    s = as_exponent(s)
    if isinstance(pair, DigitPair):
        pair = pair.to_real()
    if isinstance(pair, RealPair):
        pair = pair.refined(precision)
    row = scaled_row(pair, precision)
    integral_s = s.denominator == 1
    if exact is None:
        exact = row.exact and integral_s and N <= EXACT_AUTO_MAX_N
    elif exact and not (row.exact and integral_s):
        raise ValueError("exact evaluation needs a rational pair and an integer s")

    threshold = third_column_weight_bound(N) * row.radius
    b = _block_bits(N)
    jobs = [_Job(row.w, row.scale, threshold, N, b, i, s, precision, exact) for i in range(1 << b)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_block, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        parts = [_run_block(j) for j in jobs]

    low = min(p[1] for p in parts)
    min_denom = Fraction(low, row.scale)
    words = [w for p in parts if p[2] for w in p[2]][:MAX_POLE_WORDS]
    if words:
        if not allow_pole:
            names = ", ".join("".join(map(str, w)) for w in words)
            raise Pole(f"zero denominator at word(s) {names}", word=words[0], words=words)
        return PartitionResult(N, s, None, min_denom, True, precision, exact, tuple(words))

    if exact:
        value = sum(p[0] for p in parts)
    else:
        with _ctx(precision):
            value = gmpy2.fsum([p[0] for p in parts])

    if (
        rerun
        and not exact
        and isinstance(pair, RealPair)
        and pair.source is not None
        and precision * 2 <= MAX_PRECISION
        and min_denom < Fraction(1, 1 << (precision // 2))
    ):
        return z_value(pair, N, s, precision * 2, workers=workers, exact=False, allow_pole=allow_pole)
    return PartitionResult(N, s, value, min_denom, False, precision, exact)


@dataclass(frozen=True)
class TraceEntry:
    N: int
    normalized: object
    result: PartitionResult


@dataclass
class FreeEnergyTrace:
    k: Fraction
    s: Fraction
    entries: list[TraceEntry] = field(default_factory=list)
    poles: list[PartitionResult] = field(default_factory=list)

    def values(self) -> list[float]:
        return [float(e.normalized) for e in self.entries]

    def strictly_decreasing(self, start: int = 1) -> bool:
        vals = [e.normalized for e in self.entries if e.N >= start]
        return all(b < a for a, b in zip(vals, vals[1:]))


def free_energy_trace(
    pair: PairRepr,
    N_range: Iterable[int],
    s,
    k=1,
    precision: int = DEFAULT_PRECISION,
    *,
    workers: int = 1,
    exact: Optional[bool] = None,
) -> FreeEnergyTrace:
    """Entries (N, log Z_N / (s N^k)); pole rows go to ``trace.poles``."""
    s = as_exponent(s)
    k = Fraction(k)
    if k <= 0:
        raise ValueError("k must be positive")
    trace = FreeEnergyTrace(k, s)
    for N in sorted(set(N_range)):
        res = z_value(pair, N, s, precision, workers=workers, exact=exact, allow_pole=True)
        if res.pole:
            trace.poles.append(res)
        else:
            trace.entries.append(TraceEntry(N, res.normalized(k), res))
    return trace


def distinguished_term(pair: PairRepr, digits, m: int, s, precision: int = DEFAULT_PRECISION):
    """1 / |M * A^I|^s for the level-m digit word I = (1^{a_1}, 0, ..., 1^{a_m}, 0).

    That denominator is d_{m-1} = (1, alpha, beta) . C_{m-1}.
    """
    ds = _as_digits(digits)
    if m < 1 or len(ds) < m:
        raise ValueError(f"level {m} needs {m} digits")
    s = as_exponent(s)
    C = c_vectors(ds[:m])[-1]
    if isinstance(pair, RationalPair):
        d = C.x + C.y * pair.alpha + C.z * pair.beta
        if d == 0:
            raise Pole(f"d_{m - 1} = 0", word=digit_word(ds[:m]))
        if s.denominator == 1:
            return Fraction(1) / abs(d) ** s.numerator
        with _ctx(precision):
            return 1 / mpfr(abs(d)) ** mpfr(s)
    row = scaled_row(pair, precision)
    num = C.x * row.w[0] + C.y * row.w[1] + C.z * row.w[2]
    if abs(num) <= (abs(C.y) + abs(C.z)) * row.radius:
        raise Pole(f"d_{m - 1} is not certified nonzero", word=digit_word(ds[:m]))
    with _ctx(precision):
        return (mpfr(row.scale) / abs(num)) ** mpfr(s)

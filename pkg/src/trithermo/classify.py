"""Desk-scale experiments around the two classification theorems."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .construct import (
    Theorem1Config,
    _eval_f,
    growth_exponent_bounds,
    level_lengths,
    pair_from_digits,
    theorem1_digits,
)
from .convergents import x_vectors_by_recurrence
from .errors import DepthOverflow, ExactZero, Pole, PrecisionExhausted
from .pairs import DigitPair, Interval, PairRepr, RationalPair, RealPair, as_interval_pair
from .partition import DEFAULT_PRECISION, _ctx, as_exponent, distinguished_term, free_energy_trace, z_value


def fibonacci(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def fibonacci_closed_form(n: int, precision: int = DEFAULT_PRECISION):
    """(phi**n - psi**n) / sqrt(5) in floating point; a cross-check only."""
    with _ctx(precision):
        r5 = gmpy2.sqrt(mpfr(5))
        phi, psi = (1 + r5) / 2, (1 - r5) / 2
        return (phi ** n - psi ** n) / r5


def fibonacci_bound(N: int, s, C, d, precision: int = DEFAULT_PRECISION):
    """2**N * C**s * F_N**(s*d)."""
    s = as_exponent(s)
    with _ctx(precision):
        return mpfr(2) ** N * mpfr(C) ** mpfr(s) * mpfr(fibonacci(N)) ** (mpfr(s) * mpfr(Fraction(d)))


@dataclass(frozen=True)
class DiophantineFit:
    """Smallest C with 1/(C b^d) <= |p + alpha q + beta r| over the search box."""

    C: object
    d: Fraction
    B_max: int
    witness: tuple[int, int, int]
    witness_gap: object  # |p + alpha q + beta r| at the witness (a lower bound for real pairs)


def _screen(alpha: float, beta: float, d: float, B: int):
    """Yield float scores 1/(b^d |L|) per r-slice over primitive triples."""
    rng = np.arange(-B, B + 1, dtype=np.int64)
    P, Q = np.meshgrid(rng, rng, indexing="ij")
    for r in range(-B, B + 1):
        mask = np.gcd(np.gcd(P, Q), abs(r)) == 1
        if r == 0:
            mask &= Q != 0
        L = np.abs(P + alpha * Q + beta * r)
        b = np.maximum(np.maximum(np.abs(P), np.abs(Q)), abs(r)).astype(float)
        yield r, P[mask], Q[mask], L[mask], b[mask]


def diophantine_check(pair: PairRepr, d=2, B_max: int = 50, precision: int = DEFAULT_PRECISION) -> DiophantineFit:
    """Fit the constant C of the badly-approximable hypothesis by enumeration.

    Covers every relatively prime (p, q, r) with max(|p|, |q|, |r|) <= B_max
    and (q, r) != (0, 0).  Raises :class:`ExactZero` when some
    p + alpha q + beta r = 0; the witness is the lowest-height such triple,
    ties broken lexicographically.
    """
    d = Fraction(d)
    if B_max < 1:
        raise ValueError("B_max must be at least 1")
    if d < 2:
        raise ValueError("d must be at least 2")
    if isinstance(pair, DigitPair):
        pair = pair.to_real()
    exact = isinstance(pair, RationalPair)
    if exact:
        alpha, beta = pair.alpha, pair.beta
        a_f, b_f = float(alpha), float(beta)
    else:
        alpha, beta = pair.alpha, pair.beta
        a_f, b_f = float(alpha.mid), float(beta.mid)

    def gap(p, q, r):
        return p + alpha * q + beta * r

    # float screening picks candidates; the winner is re-scored exactly
    best = 0.0
    cands: list[tuple[float, tuple[int, int, int]]] = []
    zeros: list[tuple[int, int, int]] = []
    for r, P, Q, L, b in _screen(a_f, b_f, float(d), B_max):
        tiny = L < 1e-9
        if tiny.any():
            for p, q in zip(P[tiny].tolist(), Q[tiny].tolist()):
                g = gap(p, q, r)
                if (g == 0) if exact else Interval._lift(g).contains_zero():
                    zeros.append((p, q, r))
                else:
                    cands.append((math.inf, (p, q, r)))
            keep = ~tiny
            P, Q, L, b = P[keep], Q[keep], L[keep], b[keep]
        if L.size == 0:
            continue
        score = 1.0 / (b ** float(d) * L)
        best = max(best, float(score.max()))
        sel = score >= best * (1 - 1e-9)
        cands.extend((float(v), (p, q, r)) for v, p, q in zip(score[sel], P[sel].tolist(), Q[sel].tolist()))
    cands = [c for v, c in cands if v >= best * (1 - 1e-9)]
    if zeros:
        w = min(zeros, key=lambda t: (max(map(abs, t)), t))
        if exact:
            raise ExactZero(f"{w[0]} + {w[1]}*alpha + {w[2]}*beta = 0", witness=w)
        raise PrecisionExhausted(f"cannot certify {w} gives a nonzero gap")

    with _ctx(precision):
        scored = []
        for c in set(cands):
            g = abs(gap(*c))
            low = g if exact else g.lo
            bmax = max(abs(v) for v in c)
            C = 1 / (mpfr(bmax) ** mpfr(d) * mpfr(low))
            scored.append((C, c, low))
        C_best = max(sc[0] for sc in scored)
        winner = min((sc for sc in scored if sc[0] == C_best), key=lambda sc: sc[1])
    return DiophantineFit(winner[0], d, B_max, winner[1], winner[2])


# Theorem 2 ----------------------------------------------------------------

@dataclass
class Theorem2Row:
    N: int
    value: object
    normalized: object
    bound: object
    bound_ok: bool


@dataclass
class Theorem2Report:
    pair: str
    s: Fraction
    k: Fraction
    regime: str
    fit: DiophantineFit
    rows: list[Theorem2Row]
    tail_start: int
    tail_decreasing: bool
    final_normalized: object

    @property
    def bounds_ok(self) -> bool:
        return all(r.bound_ok for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.bounds_ok and self.tail_decreasing


def theorem2_experiment(
    pair: PairRepr,
    s=3,
    k=2,
    N_max: int = 22,
    *,
    N_min: int = 1,
    d=2,
    B_max: int = 50,
    tail_start: int = 10,
    precision: int = DEFAULT_PRECISION,
    workers: int = 1,
) -> Theorem2Report:
    """Free-energy trace, fitted (C, d), and the pointwise Fibonacci ceiling.

    Outside s > 2, k > 1 the run is labelled exploratory.
    """
    s, k = as_exponent(s), Fraction(k)
    regime = "theorem" if s > 2 and k > 1 else "exploratory"
    trace = free_energy_trace(pair, range(N_min, N_max + 1), s, k, precision, workers=workers)
    if trace.poles:
        bad = trace.poles[0]
        raise Pole(f"pole at N={bad.N}", word=bad.pole_word or (), words=bad.pole_words)
    fit = diophantine_check(pair, d, B_max, precision)
    rows = []
    for e in trace.entries:
        bound = fibonacci_bound(e.N, s, fit.C, fit.d, e.result.precision_bits)
        with _ctx(e.result.precision_bits):
            ok = bool(mpfr(e.result.value) <= bound)
        rows.append(Theorem2Row(e.N, e.result.value, e.normalized, bound, ok))
    tail = [r.normalized for r in rows if r.N >= tail_start]
    decreasing = len(tail) >= 2 and all(b < a for a, b in zip(tail, tail[1:])) and tail[-1] > 0
    return Theorem2Report(
        str(pair), s, k, regime, fit, rows, tail_start, decreasing, rows[-1].normalized if rows else None
    )


# Theorem 1 ----------------------------------------------------------------

@dataclass
class DivergenceLevel:
    m: int
    a_next: int
    N_m: int
    x_next: int
    lower_bound: object  # s log x_{m+1} / N_m^k
    threshold: object  # s f(m+1)
    x_exceeds_digit: bool
    digit_exceeds_exp: bool
    direct_term: object = None
    direct_sum: object = None
    direct_ok: Optional[bool] = None

    @property
    def ok(self) -> bool:
        base = self.x_exceeds_digit and self.digit_exceeds_exp and self.lower_bound > self.threshold
        return base and self.direct_ok is not False


@dataclass
class DivergenceReport:
    config: Theorem1Config
    s: Fraction
    digits: tuple[int, ...]
    levels: list[DivergenceLevel] = field(default_factory=list)
    overflow: Optional[str] = None

    @property
    def verdict(self) -> bool:
        return bool(self.levels) and all(lv.ok for lv in self.levels)


def theorem1_witness(
    cfg: Theorem1Config,
    s=1,
    *,
    enumerate_ceiling: int = 20,
    precision: int = DEFAULT_PRECISION,
) -> DivergenceReport:
    """Check x_{m+1} > a_{m+1} > exp(f(m+1) N_m^k) level by level.

    x_{m+1} here is the lead coordinate of C_m x C_{m+1} (the digit-a_{m+1}
    level).  When N_m <= ``enumerate_ceiling`` the single-word term
    1/|d|^s is also compared against the fully enumerated Z_{N_m} at a
    rational point of the digit cylinder.
    """
    s = as_exponent(s)
    overflow = None
    try:
        digits = theorem1_digits(cfg).digits
    except DepthOverflow as exc:
        digits, overflow = exc.digits, str(exc)
    report = DivergenceReport(cfg, s, digits, overflow=overflow)
    if len(digits) < 2:
        return report
    X = x_vectors_by_recurrence(digits)
    Ns = level_lengths(digits)
    for m in range(1, len(digits)):
        a_next, N_m = digits[m], Ns[m - 1]
        x_next = X[m + 3].x
        bits = a_next.bit_length() + 128
        _, hi = growth_exponent_bounds(cfg, m + 1, N_m, precision=bits)
        with gmpy2.context(gmpy2.get_context(), precision=bits, round=gmpy2.RoundUp):
            exp_high = gmpy2.exp(hi)
        with _ctx(precision):
            lower = mpfr(s) * gmpy2.log(mpfr(x_next)) / mpfr(N_m) ** mpfr(Fraction(cfg.k))
            threshold = mpfr(s) * _eval_f(cfg, m + 1)
        level = DivergenceLevel(m, a_next, N_m, x_next, lower, threshold, x_next > a_next, bool(gmpy2.mpz(a_next) > exp_high))
        if N_m <= enumerate_ceiling:
            rep = pair_from_digits(digits[: m + 1]).pair
            term = distinguished_term(rep, digits, m, s, precision)
            Z = z_value(rep, N_m, s, precision).value
            with _ctx(precision):
                x_pow = mpfr(x_next) ** mpfr(s)
                level.direct_ok = bool(mpfr(term) < mpfr(Z) and mpfr(term) >= x_pow)
            level.direct_term, level.direct_sum = term, Z
        report.levels.append(level)
    return report

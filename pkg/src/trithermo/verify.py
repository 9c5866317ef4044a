"""A quick end-to-end invariant suite (what ``trithermo verify`` runs).

Each check is small enough that the whole suite takes seconds.  The naive
partition sum here multiplies full matrices for every word and is kept
deliberately separate from the engine in :mod:`trithermo.partition`.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .classify import Theorem1Config, fibonacci, theorem1_witness
from .construct import pair_from_digits
from .convergents import (
    digits_from_d,
    lemma_bound,
    nested_triangle_vectors,
    unimodular_det,
    word_column_identity,
    x_vectors,
    x_vectors_by_recurrence,
)
from .errors import Pole
from .linalg import FIBONACCI_OFFSET, hs_product, word_product
from .pairs import RationalPair, cubic_fixed_point
from .partition import z_value
from .trimap import triangle_sequence


def naive_z(pair: RationalPair, N: int, s: int) -> Fraction:
    """Z_N by brute force: full matrix product and Hilbert-Schmidt product per word."""
    total = Fraction(0)
    for word in itertools.product((0, 1), repeat=N):
        denom = hs_product(pair, word_product(word))
        total += Fraction(1) / abs(denom) ** s
    return total


def random_pair(rng: random.Random, max_den: int = 10 ** 6) -> RationalPair:
    """A random rational point with 1 >= alpha >= beta > 0."""
    q = rng.randint(2, max_den)
    a = rng.randint(1, q)
    b = rng.randint(1, a)
    return RationalPair(Fraction(a, q), Fraction(b, q))


def random_independent_pair(rng: random.Random, max_den: int = 10 ** 6, N: int = 10) -> RationalPair:
    """A random pair with no zero denominator among words of length <= N."""
    while True:
        p = random_pair(rng, max_den)
        try:
            for n in range(1, N + 1):
                z_value(p, n, 1, exact=True)
            return p
        except Pole:
            continue


def interior_point(vectors, rng: random.Random) -> RationalPair:
    """A rational point strictly inside the triangle spanned by ``vectors``."""
    w = [rng.randint(1, 1000) for _ in range(3)]
    v = [sum(wi * vec[i] for wi, vec in zip(w, vectors)) for i in range(3)]
    return RationalPair(Fraction(v[1], v[0]), Fraction(v[2], v[0]))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _check_unimodular_words():
    for n in range(0, 11):
        for word in itertools.product((0, 1), repeat=n):
            if word_product(word).det() != 1:
                return False, f"det != 1 for {word}"
    return True, "det A^I = 1 for all words of length <= 10"


def _check_growth():
    for n in range(1, 13):
        bound = fibonacci(n + FIBONACCI_OFFSET)
        worst = max(word_product(w).max_abs_entry() for w in itertools.product((0, 1), repeat=n))
        if worst > bound:
            return False, f"N={n}: entry {worst} > F_{n + FIBONACCI_OFFSET} = {bound}"
    return True, f"max entry <= F_(N+{FIBONACCI_OFFSET}) for N <= 12"


def _check_engine(rng):
    for _ in range(5):
        p = random_independent_pair(rng, 1000, 6)
        for n in range(1, 7):
            if z_value(p, n, 2, exact=True).value != naive_z(p, n, 2):
                return False, f"engine != naive at {p}, N={n}"
    return True, "engine equals naive sum for N <= 6 on 5 pairs"


def _check_closed_forms(rng):
    for _ in range(20):
        p = random_independent_pair(rng, 1000, 2)
        a, b = p.alpha, p.beta
        z1 = 1 / abs(1 - a) ** 3 + 1 / abs(b) ** 3
        z2 = 1 / abs(a - b) ** 3 + 1 / abs(1 - a) ** 3 + 1 / abs(1 - a - b) ** 3 + 1 / abs(b) ** 3
        if z_value(p, 1, 3).value != z1 or z_value(p, 2, 3).value != z2:
            return False, f"closed form mismatch at {p}"
    return True, "Z_1, Z_2 closed forms hold on 20 pairs"


def _check_dual_digits(rng):
    for _ in range(50):
        p = random_pair(rng)
        if triangle_sequence(p, 15) != digits_from_d(p, 15):
            return False, f"digit streams differ at {p}"
    return True, "orbit digits equal d-recurrence digits on 50 pairs"


def _check_fixed_point(_rng):
    seq = triangle_sequence(cubic_fixed_point(512), 30)
    ok = seq.digits == (0,) * 30
    return ok, "cubic fixed point gives 30 zero digits" if ok else f"got {seq.digits}"


def _check_lemma(rng):
    n = 0
    for _ in range(20):
        p = random_pair(rng, 10 ** 9)
        seq = triangle_sequence(p, 12)
        for k in range(len(seq) - 1):
            n += 1
            if not lemma_bound(p, seq, k)[1]:
                return False, f"lemma fails at {p}, k={k}"
    return True, f"|d_k| |x_(k+1)| <= 1 in {n} cases"


def _check_word_identity(_rng):
    count = 0
    for m in range(1, 4):
        for ds in itertools.product(range(4), repeat=m):
            count += 1
            if not word_column_identity(ds):
                return False, f"word identity fails for {ds}"
    return True, f"word-column identity holds for {count} digit strings"


def _check_x_vectors(rng):
    for _ in range(50):
        ds = [rng.randint(0, 6) for _ in range(rng.randint(1, 8))]
        if x_vectors(ds) != x_vectors_by_recurrence(ds):
            return False, f"X recurrence fails for {ds}"
        for k in range(-1, len(ds)):
            if abs(unimodular_det(ds, k)) != 1:
                return False, f"det(X_k + X_(k-2), X_(k-1), X_k) != +-1 for {ds}, k={k}"
    return True, "X recurrence and unimodularity hold on 50 digit strings"


def _check_membership(rng):
    for _ in range(10):
        ds = tuple(rng.randint(0, 4) for _ in range(rng.randint(1, 5)))
        vecs = nested_triangle_vectors(ds)
        for _ in range(5):
            p = interior_point(vecs, rng)
            if triangle_sequence(p, len(ds)).digits != ds:
                return False, f"interior point {p} misses digits {ds}"
        pair_from_digits(ds)
    return True, "interior points of 10 nested triangles reproduce their digits"


def _check_theorem1(_rng):
    rep = theorem1_witness(Theorem1Config(k=1, f="linear", m_max=2, a1=3), s=1)
    return rep.verdict, f"divergence chain holds at {len(rep.levels)} levels"


def _check_pole(_rng):
    res = z_value(RationalPair(Fraction(1, 2), Fraction(1, 2)), 2, 2, allow_pole=True)
    ok = res.pole and (1, 0) in res.pole_words
    return ok, "pole at (1/2, 1/2), N=2 names word 10"


CHECKS: list[tuple[str, Callable]] = [
    ("unimodular_words", lambda rng: _check_unimodular_words()),
    ("fibonacci_growth", lambda rng: _check_growth()),
    ("engine_vs_naive", _check_engine),
    ("closed_forms", _check_closed_forms),
    ("dual_digits", _check_dual_digits),
    ("fixed_point", _check_fixed_point),
    ("lemma_bound", _check_lemma),
    ("word_column_identity", _check_word_identity),
    ("x_recurrence_unimodular", _check_x_vectors),
    ("nested_membership", _check_membership),
    ("theorem1_chain", _check_theorem1),
    ("pole_detection", _check_pole),
]


def run_invariants(seed: int = 0) -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        rng = random.Random(f"{seed}:{name}")
        t = time.perf_counter()
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t))
    return out

"""The twelve acceptance criteria, each under its time limit.

Every test records one PASS/FAIL line; conftest prints them after the run.
"""

import itertools
import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

import gmpy2
import mpmath
import pytest

from trithermo import reports
from trithermo.classify import diophantine_check, fibonacci, fibonacci_bound, theorem1_witness, theorem2_experiment
from trithermo.cli import main
from trithermo.construct import Theorem1Config
from trithermo.convergents import (
    c_vectors,
    digit_word,
    digits_from_d,
    lemma_bound,
    nested_triangle_vectors,
    word_column_identity,
)
from trithermo.errors import ExactZero, Pole
from trithermo.linalg import FIBONACCI_OFFSET, hs_product, word_product
from trithermo.pairs import RationalPair, cubic_fixed_point
from trithermo.partition import default_workers, z_value
from trithermo.trimap import triangle_sequence

from conftest import ACCEPTANCE_LINES, brute_z, cubic_root, det3, words_with_products

P = RationalPair


@contextmanager
def criterion(number, title, limit):
    info = {"detail": ""}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        line = f"[{status}] {number:>2}. {title}: {elapsed:.2f}s (limit {limit:g}s) {info['detail']}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert within, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"


def _pair_without_low_poles(rng, N, max_den=10 ** 6):
    """Random rational pair whose words up to length N have no zero denominator."""
    while True:
        q = rng.randint(2, max_den)
        a = rng.randint(1, q)
        b = rng.randint(1, a)
        pair = P(F(a, q), F(b, q))
        try:
            z_value(pair, N, 1)
        except Pole:
            continue
        return pair


def _rel(x, exact):
    with gmpy2.context(gmpy2.get_context(), precision=1024):
        e = gmpy2.mpq(exact.numerator, exact.denominator)
        return abs((gmpy2.mpfr(x) - e) / e)


def test_01_closed_forms():
    rng = random.Random(101)
    with criterion(1, "closed-form Z_1, Z_2", 10) as info:
        worst = 0
        for _ in range(100):
            pair = _pair_without_low_poles(rng, 2)
            a, b = pair.alpha, pair.beta
            s = 3
            want1 = 1 / abs(1 - a) ** s + 1 / abs(b) ** s
            want2 = 1 / abs(a - b) ** s + 1 / abs(1 - a) ** s + 1 / abs(1 - a - b) ** s + 1 / abs(b) ** s
            assert z_value(pair, 1, s, exact=True).value == want1
            assert z_value(pair, 2, s, exact=True).value == want2
            for N, want in ((1, want1), (2, want2)):
                err = _rel(z_value(pair, N, s, 256, exact=False).value, want)
                assert err <= gmpy2.mpfr(2) ** -200
                worst = max(worst, err)
        info["detail"] = f"100 pairs exact; worst 256-bit rel err 2^{math.log2(worst) if worst else -math.inf:.1f}"


def test_02_oracle_equivalence():
    rng = random.Random(202)
    with criterion(2, "incremental Z_N == naive full-product Z_N", 60) as info:
        checked = 0
        for _ in range(25):
            pair = _pair_without_low_poles(rng, 10)
            for N in range(1, 11):
                assert z_value(pair, N, 2, exact=True).value == brute_z(pair.alpha, pair.beta, N, 2)
                checked += 1
        info["detail"] = f"{checked} (pair, N) cases, exact"


def test_03_dual_digits():
    rng = random.Random(303)
    with criterion(3, "trimap digits == d-recurrence digits", 30) as info:
        lengths = []
        for _ in range(200):
            q = rng.randint(2, 10 ** rng.randint(1, 30))
            a = rng.randint(1, q)
            b = rng.randint(1, a)
            pair = P(F(a, q), F(b, q))
            seq = triangle_sequence(pair, 15)
            assert digits_from_d(pair, 15) == seq
            lengths.append(len(seq))
        full = sum(n == 15 for n in lengths)
        info["detail"] = f"200 pairs: {full} reached depth 15, {200 - full} terminated earlier"


def test_04_fixed_point():
    with criterion(4, "cubic fixed point gives 30 zero digits", 5) as info:
        pair = cubic_fixed_point(512)
        with mpmath.workdps(200):
            q = cubic_root(200)
            lo = mpmath.mpf(pair.alpha.lo.numerator) / pair.alpha.lo.denominator
            hi = mpmath.mpf(pair.alpha.hi.numerator) / pair.alpha.hi.denominator
            assert lo <= q <= hi and hi - lo <= mpmath.mpf(2) ** -511
        seq = triangle_sequence(pair, 30)
        assert seq.digits == (0,) * 30 and not seq.terminated
        info["detail"] = "enclosure width <= 2^-511 around the mpmath root"


def test_05_lemma():
    rng = random.Random(505)
    with criterion(5, "lemma |d_k| |x_{k+1}| <= 1", 60) as info:
        checks = 0
        worst = F(0)
        for _ in range(100):
            q = rng.randint(10 ** 80, 10 ** 81)
            a = rng.randint(1, q)
            b = rng.randint(1, a)
            pair = P(F(a, q), F(b, q))
            seq = triangle_sequence(pair, 22)
            for k in range(0, min(20, len(seq) - 2) + 1):
                ratio, holds = lemma_bound(pair, seq, k)
                assert holds, (pair, k, ratio)
                worst = max(worst, ratio)
                checks += 1
        info["detail"] = f"{checks} (pair, k) checks, 0 violations, max ratio {float(worst):.4f}"


def test_06_word_column_identity():
    pair = P(F(7, 19), F(3, 23))
    with criterion(6, "word-column identity, exhaustive", 60) as info:
        cases = 0
        for n in range(1, 6):
            for ds in itertools.product(range(5), repeat=n):
                check = word_column_identity(ds, pair)
                assert check, check.diagnostic
                cases += 1
        info["detail"] = f"{cases} sequences (3125 of length 5), columns and M*A = d exact"


def test_07_nested_membership():
    rng = random.Random(707)
    with criterion(7, "nested-triangle membership", 120) as info:
        hits = total = 0
        for _ in range(50):
            ds = tuple(rng.randint(0, 4) for _ in range(rng.randint(1, 5)))
            u, v, w = nested_triangle_vectors(ds)
            for _ in range(20):
                c = [rng.randint(1, 10 ** 6) for _ in range(3)]
                vec = u.scale(c[0]) + v.scale(c[1]) + w.scale(c[2])
                point = P(F(vec.y, vec.x), F(vec.z, vec.x))
                total += 1
                hits += triangle_sequence(point, len(ds)).digits == ds
        assert hits == total == 1000
        info["detail"] = f"{hits}/{total}"


def test_08_unimodular_and_fibonacci():
    with criterion(8, "det = 1 (N<=12), entries <= F_{N+c} (N<=14)", 120) as info:
        words = 0
        worst = {}
        for word, M in words_with_products(14):
            if len(word) <= 12:
                assert det3(M) == 1
                words += 1
            worst[len(word)] = max(worst.get(len(word), 0), max(abs(x) for r in M for x in r))
        for N in range(1, 15):
            assert worst[N] <= fibonacci(N + FIBONACCI_OFFSET)
        info["detail"] = f"{words} words unimodular; c = {FIBONACCI_OFFSET}"


def test_09_theorem2_trend():
    with criterion(9, "theorem-2 trend for (q, q^2), s=3, k=2", 600) as info:
        rep = theorem2_experiment(
            cubic_fixed_point(512), 3, 2, N_max=22, N_min=10, d=2, B_max=50, tail_start=10,
            precision=256, workers=default_workers(),
        )
        assert [r.N for r in rep.rows] == list(range(10, 23))
        assert rep.regime == "theorem"
        assert rep.tail_decreasing
        assert rep.final_normalized < 0.05
        assert rep.bounds_ok
        info["detail"] = (
            f"normalized {float(rep.rows[0].normalized):.4f} -> {float(rep.final_normalized):.4f}, "
            f"C = {float(rep.fit.C):.4f} witness {rep.fit.witness}"
        )


def test_10_theorem1_witness():
    with criterion(10, "theorem-1 witness chain", 60) as info:
        rep = theorem1_witness(Theorem1Config(k=1, f="linear", a1=3, m_max=2), 1)
        assert rep.verdict
        assert [lv.m for lv in rep.levels] == [1, 2]
        for lv in rep.levels:
            assert lv.x_next > lv.a_next and lv.digit_exceeds_exp
        lv1 = rep.levels[0]
        assert lv1.N_m == 4 and lv1.direct_ok
        # independent check of the direct inequality at N_1 = 4
        from trithermo.construct import pair_from_digits

        rep_pair = pair_from_digits(rep.digits[:2]).pair
        d = c_vectors(rep.digits[:1])[-1].dot((1, rep_pair.alpha, rep_pair.beta))
        assert 1 / abs(d) < brute_z(rep_pair.alpha, rep_pair.beta, 4, 1)
        info["detail"] = f"a_2 = {rep.digits[1]}, a_3 has {rep.digits[2].bit_length()} bits"


def test_11_determinism(capsys):
    with criterion(11, "partition output identical for 1, 2, 8 workers", 60) as info:
        outs = {}
        for t in ("1", "2", "8"):
            code = main(["partition", "--pair", "cubic-fixed-point", "--n", "12..18", "--s", "3", "--k", "2",
                         "--threads", t])
            assert code == 0
            outs[t] = capsys.readouterr().out
        assert outs["1"] == outs["2"] == outs["8"]
        info["detail"] = f"N = 12..18, {len(outs['1'])} bytes each"


def test_12_poles():
    with criterion(12, "pole at (1/2,1/2), ExactZero at (1/2,1/3)", 5) as info:
        with pytest.raises(Pole) as err:
            z_value(P(F(1, 2), F(1, 2)), 2, 2)
        assert (1, 0) in err.value.words
        with pytest.raises(ExactZero) as ez:
            diophantine_check(P(F(1, 2), F(1, 3)), 2, 50)
        p, q, r = ez.value.witness
        assert math.gcd(math.gcd(p, q), r) == 1 and p + F(q, 2) + F(r, 3) == 0
        words = ",".join(reports.word_str(w) for w in err.value.words)
        info["detail"] = f"pole words {words}; witness {ez.value.witness}"

import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from trithermo.construct import (
    Theorem1Config,
    exp_floor_plus_one,
    growth_exponent_bounds,
    inverse_T,
    level_lengths,
    pair_from_digits,
    refine,
    theorem1_digits,
)
from trithermo.errors import DepthOverflow
from trithermo.pairs import DigitPair, RationalPair
from trithermo.trimap import apply_T, triangle_sequence

from conftest import cubic_root

short_digits = st.lists(st.integers(0, 7), min_size=1, max_size=8)


def test_fixed_point_representative():
    enc = pair_from_digits((0,) * 30)
    with mpmath.workdps(60):
        q = cubic_root(60)
        u, v = enc.representative
        assert abs(mpmath.mpf(u.numerator) / u.denominator - q) < 1e-6
        assert abs(mpmath.mpf(v.numerator) / v.denominator - q * q) < 1e-6


def test_round_trip_example():
    enc = pair_from_digits((0, 1))
    assert triangle_sequence(enc.pair, 2).digits == (0, 1)
    assert enc.depth == 2


def test_empty_digits_rejected():
    with pytest.raises(ValueError):
        pair_from_digits(())


@settings(max_examples=80)
@given(short_digits)
def test_round_trip(ds):
    enc = pair_from_digits(ds)
    assert triangle_sequence(enc.pair, len(ds)).digits == tuple(ds)
    assert enc.contains(enc.representative)


@settings(max_examples=40)
@given(short_digits, st.integers(0, 7))
def test_enclosures_shrink(ds, a):
    assert pair_from_digits(ds + [a]).area() < pair_from_digits(ds).area()


def test_refine():
    enc = pair_from_digits((0,) * 5)
    assert refine(enc, ()) is enc
    finer = refine(enc, (0,))
    assert finer.area() < enc.area()
    with mpmath.workdps(60):
        q = cubic_root(60)
        # (q, q^2) lies inside the refined triangle; check with a close rational
        qq = F(mpmath.nstr(q, 50)), F(mpmath.nstr(q * q, 50))
    assert finer.contains(qq) and enc.contains(qq)


def test_digit_pair_enclosure():
    dp = DigitPair((2, 0, 3))
    assert dp.enclosure().digits == (2, 0, 3)
    real = dp.to_real()
    u, v = dp.enclosure().representative
    assert u in real.alpha and v in real.beta


def test_inverse_T_lands_in_sector():
    for k in range(5):
        src = inverse_T((F(1, 3), F(1, 5)), k)
        assert triangle_sequence(src, 1).digits == (k,)
        assert apply_T(src) == RationalPair(F(1, 3), F(1, 5))


def test_config_validation():
    with pytest.raises(ValueError):
        Theorem1Config(a1=2)
    with pytest.raises(ValueError):
        Theorem1Config(f="nope")
    with pytest.raises(ValueError):
        Theorem1Config(k=0)
    assert Theorem1Config().f_increasing
    assert not Theorem1Config(f="constant").f_increasing


def test_theorem1_digits_default():
    ds = theorem1_digits(Theorem1Config())
    assert ds[0] == 3
    assert ds[1] == math.floor(math.exp(8)) + 1 == 2981
    assert level_lengths(ds)[:2] == [4, 2986]
    # a_3 = floor(e^{3 * 2986}) + 1, checked with an independent mpmath evaluation
    with mpmath.workdps(4000):
        want = int(mpmath.floor(mpmath.exp(3 * 2986))) + 1
    assert ds[2] == want
    assert ds[2].bit_length() == 12924


def test_log_preset_digits_are_exact_powers():
    # exp(log(m + 2) * N) = (m + 2)**N, so a_{m+1} = (m + 2)**N_m + 1 exactly
    ds = theorem1_digits(Theorem1Config(f="log", m_max=2))
    assert len(ds) == 3
    for m in range(1, len(ds)):
        assert ds[m] == (m + 2) ** (sum(ds[:m]) + m) + 1


@pytest.mark.parametrize("f,k", [("linear", 1), ("constant", 2), ("linear", F(3, 2))])
def test_digit_growth_matches_mpmath(f, k):
    cfg = Theorem1Config(k=k, f=f, m_max=2, bit_budget=1 << 16)
    try:
        ds = theorem1_digits(cfg)
    except DepthOverflow as exc:
        ds = exc.digits
    fn = {"linear": lambda m: m, "constant": lambda m: 1}[f]
    kk = mpmath.mpf(k.numerator) / k.denominator if isinstance(k, F) else k
    for m in range(1, len(ds)):
        N = sum(ds[:m]) + m
        with mpmath.workdps(max(50, int(fn(m + 1) * N ** float(k) / 2.3) + 50)):
            want = int(mpmath.floor(mpmath.exp(fn(m + 1) * mpmath.mpf(N) ** kk))) + 1
        assert ds[m] == want


def test_depth_overflow_carries_partial_digits():
    with pytest.raises(DepthOverflow) as err:
        theorem1_digits(Theorem1Config(m_max=3, bit_budget=1 << 14))
    assert tuple(err.value.digits[:2]) == (3, 2981)
    assert err.value.needed_bits > 1 << 14


def test_exponent_bounds_bracket():
    lo, hi = growth_exponent_bounds(Theorem1Config(f="log"), 3, 17)
    assert lo <= hi and hi - lo < 1e-30
    assert exp_floor_plus_one(lo, hi) > math.exp(float(hi)) - 1

import itertools
import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import strategies as st

# Oracles below are written against plain lists on purpose: they must not
# share code paths with the package.

A0_ROWS = [[0, 0, 1], [1, 0, -1], [0, 1, 0]]
A1_ROWS = [[1, 0, 0], [0, 1, 0], [-1, 0, 1]]
IDENT = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def matmul(A, B):
    return [[sum(A[i][t] * B[t][j] for t in range(3)) for j in range(3)] for i in range(3)]


def det3(A):
    (a, b, c), (d, e, f), (g, h, i) = A
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def words_with_products(max_len):
    """Yield (word, product) for every word of length <= max_len, prefix-shared."""
    stack = [((), IDENT)]
    while stack:
        word, P = stack.pop()
        yield word, P
        if len(word) < max_len:
            stack.append((word + (1,), matmul(P, A1_ROWS)))
            stack.append((word + (0,), matmul(P, A0_ROWS)))


def brute_z(alpha, beta, N, s):
    """Z_N by enumerating words and multiplying full matrices."""
    total = Fraction(0)
    for word in itertools.product((0, 1), repeat=N):
        P = IDENT
        for sigma in word:
            P = matmul(P, A0_ROWS if sigma == 0 else A1_ROWS)
        x, y, z = P[0][2], P[1][2], P[2][2]
        total += Fraction(1) / abs(x + alpha * y + beta * z) ** s
    return total


def brute_sector(alpha, beta):
    """Search k upward until 1 - a - k b >= 0 > 1 - a - (k+1) b."""
    k = 0
    while not (1 - alpha - k * beta >= 0 > 1 - alpha - (k + 1) * beta):
        k += 1
        if k > 10 ** 7:
            raise RuntimeError("no sector")
    return k


def brute_digits(alpha, beta, n):
    out = []
    for _ in range(n):
        if beta == 0:
            break
        k = brute_sector(alpha, beta)
        out.append(k)
        alpha, beta = beta / alpha, (1 - alpha - k * beta) / alpha
    return out


def cubic_root(dps=200):
    with mpmath.workdps(dps):
        return mpmath.findroot(lambda t: t ** 3 + t - 1, 0.68)


def fib(n):
    return round(((1 + 5 ** 0.5) / 2) ** n / 5 ** 0.5) if n < 70 else None


def random_rational_pair(rng, max_den=10 ** 6):
    q = rng.randint(2, max_den)
    a = rng.randint(1, q)
    b = rng.randint(1, a)
    return Fraction(a, q), Fraction(b, q)


@st.composite
def rational_pairs(draw, max_den=10 ** 4):
    q = draw(st.integers(2, max_den))
    a = draw(st.integers(1, q))
    b = draw(st.integers(1, a))
    return Fraction(a, q), Fraction(b, q)


@pytest.fixture
def rng():
    return random.Random(20240607)


# acceptance summary --------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

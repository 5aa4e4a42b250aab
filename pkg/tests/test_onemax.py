from fractions import Fraction as Fr
from math import comb

import numpy as np
import pytest

from bitflip.bitspace import BitString, all_strings, popcount
from bitflip.mutation import build_F_enumerative, mutation_prob
from bitflip.onemax import (family_varpi, level_of_ones, level_sizes, ones_of_level, onemax_F, onemax_table,
                            varpi, varpi_numerators, xi_matrix)

from conftest import random_bits


def level_histogram(n, x, p, g=None):
    """Oracle: probability of moving from x to each level of g (default Onemax)."""
    g = g or (lambda y: n - 2 * popcount(y))
    out = [Fr(0)] * (n + 1)
    for y in all_strings(n):
        out[(g(y) + n) // 2] += mutation_prob(x, y, p)
    return out


def test_xi_examples():
    X = xi_matrix(1, 1).entries
    assert X[1, 1] == 1 and X[1, 0] == 0
    X = xi_matrix(7, 6).entries
    assert list(X[0]) == [1] + [0] * 7
    for m in range(7):
        for j in range(8):
            if (m + j) % 2:
                assert X[m, j] == 0


def test_onemax_F_examples():
    F = onemax_F(1, 0, 1).entries
    assert list(F[1]) == [0, 1]
    assert list(onemax_F(5, 3, 2).entries[0]) == [1, 0, 0, 0, 0, 0]
    with pytest.raises(IndexError):
        onemax_F(3, 4, 1)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_onemax_F_matches_enumeration(n):
    f = onemax_table(n)
    for ones in range(n + 1):
        x = BitString((1 << ones) - 1, n)
        assert np.array_equal(onemax_F(n, ones, 4).entries, build_F_enumerative(f, 4, x).entries)


def test_varpi_examples():
    p = Fr(2, 9)
    assert varpi(1, p).entries.tolist() == [[1 - p, p], [p, 1 - p]]
    assert varpi(2, p).entries[1, 2] == p * (1 - p) == (1 - (1 - 2 * p) ** 2) / 4
    assert varpi(6, Fr(0)).entries.tolist() == np.eye(7, dtype=int).tolist()
    with pytest.raises(ValueError):
        varpi(3, Fr(5, 4))


@pytest.mark.parametrize("n", [2, 5, 8])
@pytest.mark.parametrize("p", [Fr(1, 10), Fr(1, 4), Fr(1, 2)])
def test_varpi_matches_oracle(n, p):
    W = varpi(n, p).entries
    for i in range(n + 1):
        x = BitString((1 << ones_of_level(n, i)) - 1, n)
        assert list(W[i]) == level_histogram(n, x, p)


def test_half_gives_binomial_rows():
    n = 9
    W = varpi(n, Fr(1, 2)).entries
    row = [Fr(comb(n, j), 2**n) for j in range(n + 1)]
    assert all(list(r) == row for r in W)


@pytest.mark.parametrize("n", [1, 7, 30, 64])
def test_symmetries_exact(n):
    W = varpi(n, Fr(3, 17)).entries
    for i in range(n + 1):
        assert sum(W[i]) == 1
        for j in range(n + 1):
            assert comb(n, i) * W[i, j] == comb(n, j) * W[j, i]
            assert W[n - i, n - j] == W[i, j]
            assert 0 <= W[i, j] <= 1


def test_float_kernel_against_exact():
    for n in (5, 40, 100):
        p = 0.0137
        exact = varpi(n, p, method="krawtchouk").entries
        fast = varpi(n, p).entries
        assert np.allclose(fast, exact, rtol=1e-10, atol=1e-300)
        assert np.allclose(fast.sum(axis=1), 1.0, atol=1e-12)


def test_numerators():
    N, D = varpi_numerators(2, Fr(1, 3))
    assert D == 4 * 9
    assert N.tolist() == [[16, 16, 4], [8, 20, 8], [4, 16, 16]]


def test_family_varpi(rng):
    n, p = 4, Fr(3, 10)
    base = varpi(n, p).entries
    assert np.array_equal(family_varpi(n, p).entries, base)
    assert np.array_equal(family_varpi(n, p, "decreasing", random_bits(n, rng)).entries, base)
    with pytest.raises(ValueError):
        family_varpi(n, p, shift=BitString.zeros(3))
    with pytest.raises(ValueError):
        family_varpi(n, p, "sideways")


@pytest.mark.parametrize("direction", ["increasing", "decreasing"])
def test_family_against_oracle(direction, rng):
    n, p = 6, Fr(1, 4)
    u = random_bits(n, rng)
    sign = 1 if direction == "increasing" else -1
    # h(k) = sign * (n - 2k)**3 is strictly monotone in k = |x xor u|
    g = lambda y: sign * (n - 2 * popcount(y ^ u)) ** 3
    values = sorted({g(y) for y in all_strings(n)})
    W = family_varpi(n, p, direction, u).entries
    for i, gi in enumerate(values):
        x = next(y for y in all_strings(n) if g(y) == gi)
        hist = [Fr(0)] * (n + 1)
        for y in all_strings(n):
            hist[values.index(g(y))] += mutation_prob(x, y, p)
        assert list(W[i]) == hist


def test_level_helpers():
    assert level_of_ones(5, 2) == 3 and ones_of_level(5, 3) == 2
    assert sum(level_sizes(10)) == 1024
    with pytest.raises(IndexError):
        level_of_ones(3, 4)


def test_csv_header():
    text = varpi(1, Fr(1, 4)).to_csv()
    assert text.splitlines()[0] == "from\\to,-1,1"
    assert text.splitlines()[1] == "-1,3/4,1/4"

from fractions import Fraction as Fr

import numpy as np
import pytest

from bitflip.bitspace import BitString, popcount
from bitflip.errors import BudgetExceededError
from bitflip.oracle import brute_distribution, brute_power_walsh, brute_walsh_coeff, simulate_ea
from bitflip.runtime import onemax_runtime
from bitflip.walsh import FunctionTable, transform, walsh_eval

from conftest import random_bits, random_table


def test_brute_distribution_edges(rng):
    f = random_table(4, rng)
    x = random_bits(4, rng)
    at0 = dict(zip(brute_distribution(f, x, 0).levels.values, brute_distribution(f, x, 0).entries))
    assert at0[f(x)] == 1 and sum(at0.values()) == 1
    comp = ~x
    at1 = brute_distribution(f, x, 1)
    assert dict(zip(at1.levels.values, at1.entries))[f(comp)] == 1


def test_brute_distribution_onemax_one_bit():
    f = FunctionTable.from_callable(1, lambda x: 1 - 2 * popcount(x))
    p = Fr(1, 6)
    assert list(brute_distribution(f, BitString.parse("1"), p).entries) == [1 - p, p]


def test_dimension_guard():
    f = FunctionTable(15, np.zeros(1 << 15))
    with pytest.raises(BudgetExceededError):
        brute_distribution(f, BitString.zeros(15), 0.1)


def test_walsh_coeff_oracle(rng):
    f = random_table(3, rng)
    mean = sum(f.values) / Fr(8)
    assert brute_walsh_coeff(f, BitString.zeros(3)) == mean
    t = BitString.parse("101")
    psi = FunctionTable.from_callable(3, lambda x: walsh_eval(t, x))
    for w in range(8):
        assert brute_walsh_coeff(psi, BitString(w, 3)) == (1 if w == t.word else 0)


def test_power_walsh(rng):
    f = random_table(4, rng)
    assert np.array_equal(brute_power_walsh(f, 1).coeffs, transform(f).coeffs)
    assert list(brute_power_walsh(f, 0).coeffs) == [1] + [0] * 15
    assert np.array_equal(brute_power_walsh(f, 2).coeffs, transform(f.power(2)).coeffs)
    with pytest.raises(BudgetExceededError):
        brute_power_walsh(f, 4)


def test_simulation_basics():
    r = simulate_ea(1, 1, 0.5, 100_000, 11)
    assert r.contains(1.0)
    again = simulate_ea(1, 1, 0.5, 100_000, 11)
    assert np.array_equal(r.samples, again.samples)
    assert "xoshiro256**" in r.generator
    with pytest.raises(ValueError):
        simulate_ea(5, 1, 0.1, 10, 0)
    with pytest.raises(ValueError):
        simulate_ea(5, 1, 1.0, 100, 0)


@pytest.mark.parametrize("n", [5, 10])
@pytest.mark.parametrize("lam", [1, 5])
@pytest.mark.parametrize("c", [1, 2])
def test_simulation_agrees_with_exact(n, lam, c):
    p = Fr(c, n)
    exact = float(onemax_runtime(n, p, lam, "mp").expected_runtime)
    r = simulate_ea(n, lam, float(p), 10_000, 1000 * n + 10 * lam + c)
    assert r.contains(exact), (r.mean, r.ci99_halfwidth, exact)

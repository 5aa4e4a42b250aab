from fractions import Fraction as Fr

import numpy as np
import pytest

from bitflip.bitspace import BitString, all_strings, popcount
from bitflip.errors import ConditioningError
from bitflip.mutation import (FitnessLevels, FMatrix, ProbabilityVector, build_F_enumerative, cdf,
                              distribution, expected_value, improvement_prob, lambda_vector, moments,
                              mutation_prob, solve_exact, solve_moment_vandermonde)
from bitflip.oracle import brute_distribution, brute_power_walsh
from bitflip.walsh import FunctionTable, elementary_components, transform

from conftest import random_bits, random_table


def B(s):
    return BitString.parse(s)


def onemax(n):
    return FunctionTable.from_callable(n, lambda x: n - 2 * popcount(x))


def test_mutation_prob_examples():
    assert mutation_prob(B("01"), B("01"), 0) == 1
    assert mutation_prob(B("00"), B("11"), Fr(1, 5)) == Fr(1, 25)
    assert mutation_prob(B("010"), B("011"), Fr(1, 3)) == Fr(4, 27)
    with pytest.raises(ValueError):
        mutation_prob(B("0"), B("1"), Fr(3, 2))


@pytest.mark.parametrize("p", [Fr(0), Fr(1, 4), Fr(1, 2), Fr(3, 4), Fr(1)])
def test_kernel_normalisation(p):
    for n in (1, 5, 12):
        x = BitString((1 << n) // 3, n)
        assert sum(mutation_prob(x, y, p) for y in all_strings(n)) == 1


def test_lambda_vector():
    assert lambda_vector(Fr(0), 3).entries == (1, 1, 1, 1)
    assert lambda_vector(Fr(1, 2), 3).entries == (1, 0, 0, 0)
    assert lambda_vector(1, 2).entries == (1, -1, 1)


def test_expected_value_examples(rng):
    n = 4
    comps = [0, n, 0, 0, 0]
    assert expected_value(comps, Fr(1, 10)) == Fr(4 * 8, 10)
    f = random_table(6, rng)
    e = transform(f)
    x = random_bits(6, rng)
    comps = elementary_components(e, x)
    assert expected_value(comps, Fr(1, 2)) == comps[0]
    brute = sum(f(y) * mutation_prob(x, y, 0.3) for y in all_strings(6))
    assert abs(float(expected_value(comps.astype(float), 0.3)) - float(brute)) < 1e-10


def test_F_rows_and_whole_space_moments(rng):
    f = random_table(5, rng)
    x = random_bits(5, rng)
    F = build_F_enumerative(f, 4, x)
    assert list(F.entries[0]) == [1] + [0] * 5
    for m in range(5):
        assert F.entries[m, 0] == sum(v**m for v in f.values) / Fr(32)
    mu = moments(F, Fr(1, 2))
    assert list(mu) == list(F.entries[:, 0])


def test_F_constant_function():
    F = build_F_enumerative(FunctionTable.from_values(3, [Fr(3)] * 8), 3, B("101"))
    assert [F.entries[m, 0] for m in range(4)] == [1, 3, 9, 27]
    assert all(v == 0 for v in F.entries[:, 1:].ravel())


def test_F_against_multinomial_oracle(rng):
    f = random_table(6, rng, -2, 2)
    x = random_bits(6, rng)
    F = build_F_enumerative(f, 3, x)
    for m in range(4):
        assert list(F.entries[m]) == list(elementary_components(brute_power_walsh(f, m), x))


def test_moments_against_brute_force(rng):
    for n in (4, 7):
        f = random_table(n, rng)
        x = random_bits(n, rng)
        F = build_F_enumerative(f, 4, x)
        for p in (Fr(1, 7), 0.3):
            mu = moments(F if isinstance(p, Fr) else F.as_float(), p)
            for m in range(5):
                brute = sum(f(y) ** m * mutation_prob(x, y, p) for y in all_strings(n))
                if isinstance(p, Fr):
                    assert mu[m] == brute
                else:
                    assert abs(mu[m] - float(brute)) <= 1e-9 * max(1.0, abs(float(brute)))


def test_distribution_examples():
    f = onemax(1)
    x = B("1")
    levels = FitnessLevels.from_table(f)
    F = build_F_enumerative(f, 1, x)
    pi = distribution(F, levels, Fr(1, 5))
    assert list(pi.entries) == [Fr(4, 5), Fr(1, 5)]
    Pi = cdf(pi)
    assert list(Pi.entries) == [Fr(4, 5), 1]
    assert improvement_prob(Pi, 0) == Fr(1, 5)
    assert improvement_prob(Pi, 1) == 0
    with pytest.raises(IndexError):
        improvement_prob(Pi, 2)
    const = FunctionTable.from_values(2, [Fr(5)] * 4)
    assert list(distribution(build_F_enumerative(const, 0, B("00")), FitnessLevels((5,)), Fr(1, 3)).entries) == [1]


def test_improvement_onemax_two_bits():
    f = onemax(2)
    p = Fr(2, 7)
    pi = distribution(build_F_enumerative(f, 2, B("01")), FitnessLevels.from_table(f), p)
    assert improvement_prob(cdf(pi), 1) == p * (1 - p)


def test_distribution_vs_oracle(rng):
    for _ in range(6):
        n = rng.randint(2, 7)
        f = random_table(n, rng, -6, 6, distinct=rng.randint(1, 6))
        x = random_bits(n, rng)
        levels = FitnessLevels.from_table(f)
        F = build_F_enumerative(f, levels.q - 1, x)
        for p in (Fr(1, 4), Fr(9, 10)):
            assert list(distribution(F, levels, p).entries) == list(brute_distribution(f, x, p).entries)
        approx = distribution(F.as_float(), levels, 0.25).entries
        assert np.allclose(approx, brute_distribution(f, x, 0.25).entries.astype(float), atol=1e-8)


def test_moment_consistency_and_half(rng):
    f = random_table(5, rng, 0, 4)
    x = random_bits(5, rng)
    levels = FitnessLevels.from_table(f)
    F = build_F_enumerative(f, levels.q - 1, x)
    p = Fr(3, 11)
    pi = distribution(F, levels, p)
    mu = moments(F, p)
    for m in range(levels.q):
        assert mu[m] == sum(v**m * w for v, w in zip(levels.values, pi.entries))
    half = distribution(F, levels, Fr(1, 2))
    assert [w * 32 for w in half.entries] == list(levels.level_sizes)


def test_probabilities_are_polynomials_in_p(rng):
    n = 4
    f = random_table(n, rng, -3, 3, distinct=4)
    x = random_bits(n, rng)
    levels = FitnessLevels.from_table(f)
    F = build_F_enumerative(f, levels.q - 1, x)
    ps = [Fr(k, 17) for k in range(1, levels.q + n + 2)]
    values = [distribution(F, levels, p).entries[0] for p in ps]
    # Lagrange interpolation through n + 1 points, checked on the rest and a fresh p
    base = ps[: n + 1]

    def interp(t):
        total = Fr(0)
        for i, pi in enumerate(base):
            term = values[i]
            for k, pk in enumerate(base):
                if k != i:
                    term *= (t - pk) / (pi - pk)
            total += term
        return total

    for p, v in zip(ps, values):
        assert interp(p) == v
    fresh = Fr(5, 23)
    assert interp(fresh) == distribution(F, levels, fresh).entries[0]


def test_truncation_is_refused(rng):
    f = random_table(3, rng, distinct=4)
    levels = FitnessLevels.from_table(f)
    F = build_F_enumerative(f, levels.q - 2, B("000"))
    with pytest.raises(ValueError):
        distribution(F, levels, Fr(1, 3))


def test_float_conditioning_limit():
    q = 31
    F = FMatrix(q - 1, 1, np.zeros((q, 2)))
    with pytest.raises(ConditioningError):
        distribution(F, FitnessLevels(tuple(range(q))), 0.1)


def test_bjorck_pereyra_matches_dense_solve():
    rng = np.random.default_rng(1)
    for q in (1, 2, 5, 12):
        xi = np.sort(rng.choice(np.arange(-20, 20), q, replace=False)).astype(float)
        mu = rng.normal(size=q)
        V = np.vander(xi, increasing=True).T
        assert np.allclose(solve_moment_vandermonde(xi, mu), np.linalg.solve(V, mu), rtol=1e-8, atol=1e-10)


def test_solve_exact():
    A = [[2, 1], [1, 3]]
    assert solve_exact(A, [3, 5]) == [Fr(4, 5), Fr(7, 5)]
    with pytest.raises(ArithmeticError):
        solve_exact([[1, 1], [1, 1]], [1, 2])


def test_levels_validation():
    with pytest.raises(ValueError):
        FitnessLevels((1, 1))
    with pytest.raises(ValueError):
        FitnessLevels(())
    with pytest.raises(ValueError):
        FitnessLevels((0, 1), (1, 2))


def test_cdf_matches_lower_triangular_product(rng):
    pi = ProbabilityVector(np.array([Fr(rng.randint(1, 9), 40) for _ in range(5)], dtype=object))
    L = np.tril(np.ones((5, 5), dtype=int)).astype(object)
    assert list(cdf(pi).entries) == list(L.dot(pi.entries))

"""Brute-force and Monte-Carlo references, used only to check the analytic code.

Nothing here calls the fast transforms or the closed forms: every quantity is
summed term by term from its definition.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial, sqrt
from statistics import NormalDist

import numpy as np

from . import _kernels
from ._scalars import as_exact, check_probability, is_exact
from .bitspace import BitString, popcount_int
from .errors import BudgetExceededError
from .mutation import FitnessLevels, ProbabilityVector, mutation_prob
from .walsh import FunctionTable, WalshExpansion

BRUTE_LIMIT = 14
POWER_N_LIMIT = 8
POWER_M_LIMIT = 3
GENERATOR = "xoshiro256** seeded by splitmix64; run r uses seed + r * 0xD1B54A32D192ED03 (mod 2^64)"


def _check(n: int, limit: int = BRUTE_LIMIT) -> None:
    if n > limit:
        raise BudgetExceededError(f"n={n} exceeds the brute-force limit {limit}")


def brute_krawtchouk_entry(n: int, r: int, j: int) -> int:
    """``sum_l (-1)**l C(j, l) C(n - j, r - l)``, with out-of-range binomials 0."""
    if not (0 <= r <= n and 0 <= j <= n):
        raise IndexError(f"({r}, {j}) outside 0..{n}")
    return sum((-1) ** l * comb(j, l) * comb(n - j, r - l) for l in range(0, min(j, r) + 1))


def _coerce_p(p, exact: bool):
    check_probability(p)
    return as_exact(p) if exact else float(p)


def brute_distribution(f: FunctionTable, x: BitString, p) -> ProbabilityVector:
    """Histogram of ``f(y)`` over all ``y`` weighted by the mutation kernel."""
    _check(f.n)
    exact = f.exact and is_exact(p)
    pp = _coerce_p(p, exact)
    mass: dict = {}
    for w in range(1 << f.n):
        y = BitString(w, f.n)
        val = f.values[w]
        mass[val] = mass.get(val, 0) + mutation_prob(x, y, pp)
    values = sorted(set(f.values.tolist()))
    entries = [mass[v] for v in values]
    arr = np.array(entries, dtype=object if exact else np.float64)
    return ProbabilityVector(arr, FitnessLevels(tuple(values)))


def level_histogram(f: FunctionTable, x: BitString, p, levels) -> list:
    """Probability of each value in ``levels`` (zero when unattained)."""
    pv = brute_distribution(f, x, p)
    lookup = dict(zip(pv.levels.values, pv.entries))
    zero = Fraction(0) if pv.exact else 0.0
    return [lookup.get(v, zero) for v in levels]


def brute_walsh_coeff(f: FunctionTable, w: BitString):
    """``a_w = 2^-n sum_x psi_w(x) f(x)``, one term at a time."""
    _check(f.n)
    total = 0
    for xw in range(1 << f.n):
        sign = -1 if popcount_int(xw & w.word) & 1 else 1
        total += sign * f.values[xw]
    if f.exact:
        return Fraction(total) / (1 << f.n)
    return total / (1 << f.n)


def brute_walsh_expansion(f: FunctionTable) -> WalshExpansion:
    coeffs = [brute_walsh_coeff(f, BitString(w, f.n)) for w in range(1 << f.n)]
    return WalshExpansion(f.n, np.array(coeffs, dtype=object if f.exact else np.float64))


def brute_power_walsh(f: FunctionTable, m: int) -> WalshExpansion:
    """Walsh expansion of ``f**m`` by multiplying out ``(sum_w a_w psi_w)**m``.

    Each ordered m-tuple of words contributes ``prod a_w`` to the coefficient
    of the XOR of the tuple (``psi_w psi_t = psi_{w xor t}``).  Tuples are
    grouped by multiset, weighted by multinomial coefficients.
    """
    _check(f.n, POWER_N_LIMIT)
    if not 0 <= m <= POWER_M_LIMIT:
        raise BudgetExceededError(f"power {m} outside 0..{POWER_M_LIMIT}")
    base = brute_walsh_expansion(f).coeffs
    size = 1 << f.n
    out = [Fraction(0) if f.exact else 0.0] * size
    if m == 0:
        out[0] += 1
    else:
        support = [w for w in range(size) if base[w] != 0]
        for combo in product(support, repeat=m):
            if list(combo) != sorted(combo):
                continue
            counts = Counter(combo)
            mult = factorial(m)
            for c in counts.values():
                mult //= factorial(c)
            term = mult
            key = 0
            for w in combo:
                term = term * base[w]
                key ^= w
            out[key] += term
    return WalshExpansion(f.n, np.array(out, dtype=object if f.exact else np.float64))


def brute_elementary(f: FunctionTable, x: BitString) -> list:
    """``f_[j](x)`` for every order j, from term-by-term coefficients."""
    e = brute_walsh_expansion(f)
    out = [0] * (f.n + 1)
    for w in range(1 << f.n):
        sign = -1 if popcount_int(w & x.word) & 1 else 1
        out[popcount_int(w)] += sign * e.coeffs[w]
    return out


@dataclass(frozen=True)
class SimulationResult:
    mean: float
    ci99_halfwidth: float
    runs: int
    seed: int
    generator: str
    backend: str
    samples: np.ndarray

    @property
    def interval(self) -> tuple[float, float]:
        return self.mean - self.ci99_halfwidth, self.mean + self.ci99_halfwidth

    def contains(self, value: float) -> bool:
        lo, hi = self.interval
        return lo <= value <= hi


def simulate_ea(n: int, lam: int, p: float, runs: int, seed: int) -> SimulationResult:
    """Run the (1+lambda) EA on Onemax ``runs`` times from random starts.

    Generations are counted until the optimum is first sampled.  Offspring are
    all mutated from the same parent; the best replaces it only if strictly
    better.  The interval uses the normal approximation at 99%.
    """
    if runs < 100:
        raise ValueError("at least 100 runs are required")
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    if lam < 1 or n < 1:
        raise ValueError("n and lambda must be positive")
    seed = int(seed) % (1 << 64)
    samples = _kernels.simulate_onemax_ea(n, lam, p, runs, seed)
    mean = float(samples.mean())
    sd = float(samples.std(ddof=1))
    z = NormalDist().inv_cdf(0.995)
    return SimulationResult(mean, z * sd / sqrt(runs), runs, seed, GENERATOR, _kernels.BACKEND, samples)

"""Pure-Python/numpy implementations of the hot loops.

Every function here has a twin in ``_ckernels.pyx`` with the same signature
and, for the simulator, the same random stream.
"""
from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN64 = 0x9E3779B97F4A7C15
RUN_STRIDE = 0xD1B54A32D192ED03
TWO_M53 = 2.0 ** -53


def fwht(values) -> np.ndarray:
    """Unnormalised Walsh-Hadamard butterfly; returns a transformed copy.

    Works for float arrays and for object arrays of exact scalars.
    """
    a = np.array(values, copy=True)
    size = a.shape[0]
    if size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    h = 1
    while h < size:
        v = a.reshape(-1, 2, h)
        left = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = left - v[:, 1, :]
        h *= 2
    return a


def varpi_factored(n: int, p: float) -> np.ndarray:
    """Onemax level transition matrix in float arithmetic.

    Row ``i`` (i zeros, n - i ones) is the coefficient list of
    ``((1-p) + p z)**(n-i) * (p + (1-p) z)**i``, i.e. the number of zeros after
    mutation.  This is the product form of the Krawtchouk sum and, unlike it,
    has no cancellation.
    """
    q = 1.0 - p
    out = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        ones = n - i
        became_zero = np.array([math.comb(ones, k) * p**k * q ** (ones - k) for k in range(ones + 1)])
        stayed_zero = np.array([math.comb(i, k) * q**k * p ** (i - k) for k in range(i + 1)])
        out[i] = np.convolve(became_zero, stayed_zero)
    return out


def splitmix64(state: int) -> tuple[int, int]:
    state = (state + GOLDEN64) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


class Xoshiro256:
    """xoshiro256** seeded from four splitmix64 outputs."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        sm = seed & MASK64
        sm, self.s0 = splitmix64(sm)
        sm, self.s1 = splitmix64(sm)
        sm, self.s2 = splitmix64(sm)
        sm, self.s3 = splitmix64(sm)

    def next(self) -> int:
        s0, s1, s2, s3 = self.s0, self.s1, self.s2, self.s3
        x = (s1 * 5) & MASK64
        result = ((((x << 7) | (x >> 57)) & MASK64) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
        self.s0, self.s1, self.s2, self.s3 = s0, s1, s2, s3
        return result


def run_seed(seed: int, run: int) -> int:
    return (seed + run * RUN_STRIDE) & MASK64


def _one_run(n: int, lam: int, log_q: float, rng: Xoshiro256) -> int:
    nxt = rng.next
    log = math.log
    bits = bytearray(n)
    ones = 0
    for i in range(n):
        b = nxt() >> 63
        bits[i] = b
        ones += b
    flips: list[int] = []
    best_flips: list[int] = []
    gens = 0
    while ones > 0:
        gens += 1
        best_ones = ones
        best_flips = []
        for _ in range(lam):
            flips = []
            pos = -1
            child = ones
            while True:
                u = ((nxt() >> 11) + 1) * TWO_M53
                gap = log(u) / log_q
                if gap >= n - pos - 1:
                    break
                pos += math.floor(gap) + 1
                flips.append(pos)
                child += 1 - 2 * bits[pos]
            if child < best_ones:
                best_ones = child
                best_flips = flips
        if best_ones < ones:
            for pos in best_flips:
                bits[pos] ^= 1
            ones = best_ones
    return gens


def simulate_onemax_ea(n: int, lam: int, p: float, runs: int, seed: int) -> np.ndarray:
    """Generations to optimum for ``runs`` independent (1+lambda) EA runs.

    Fitness is ``n - 2|x|`` (maximised at the all-zeros string).  Run ``r``
    draws from its own xoshiro256** stream seeded with ``run_seed(seed, r)``.
    """
    log_q = math.log1p(-p)
    out = np.empty(runs, dtype=np.int64)
    for r in range(runs):
        out[r] = _one_run(n, lam, log_q, Xoshiro256(run_seed(seed, r)))
    return out

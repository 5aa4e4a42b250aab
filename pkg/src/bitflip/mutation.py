"""Fitness distribution of a solution after uniform bit-flip mutation.

The m-th moment of ``f(M_p(x))`` is ``sum_j (1-2p)**j * F[m][j]`` where
``F[m][j]`` is the order-j elementary component of ``f**m`` at ``x``.  With
the distinct fitness values ``xi_0 < ... < xi_{q-1}`` the probabilities solve
the transposed Vandermonde system ``sum_i xi_i**m * pi_i = mu_m``, m < q.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np

from . import _kernels
from ._scalars import as_exact, check_probability, is_exact
from .bitspace import ENUM_LIMIT, BitString, popcount_int
from .errors import ConditioningError
from .walsh import FunctionTable, popcounts, walsh_signs

#: Largest Vandermonde system solved in float arithmetic.
FLOAT_VANDERMONDE_LIMIT = 30


@dataclass(frozen=True, eq=False)
class FMatrix:
    """``entries[m, j]`` = order-j elementary component of ``f**m`` at a fixed x."""

    m_max: int
    n: int
    entries: np.ndarray
    provenance: str = "enumerative"

    def __post_init__(self):
        if self.entries.shape != (self.m_max + 1, self.n + 1):
            raise ValueError(f"F shape {self.entries.shape} != {(self.m_max + 1, self.n + 1)}")

    @property
    def exact(self) -> bool:
        return self.entries.dtype == object

    def as_float(self) -> FMatrix:
        return FMatrix(self.m_max, self.n, self.entries.astype(np.float64), self.provenance)

    def to_csv(self) -> str:
        from ._scalars import format_scalar

        rows = ["m," + ",".join(f"j{j}" for j in range(self.n + 1))]
        for m, row in enumerate(self.entries):
            rows.append(f"{m}," + ",".join(format_scalar(v) for v in row))
        return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class LambdaVector:
    p: object
    n: int
    entries: tuple


@dataclass(frozen=True)
class FitnessLevels:
    values: tuple
    level_sizes: tuple | None = None

    def __post_init__(self):
        if not self.values:
            raise ValueError("at least one fitness level is required")
        if any(a >= b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("fitness levels must be strictly increasing")
        if self.level_sizes is not None:
            if len(self.level_sizes) != len(self.values):
                raise ValueError("level_sizes length differs from values")
            total = sum(self.level_sizes)
            if total <= 0 or total & (total - 1):
                raise ValueError(f"level sizes sum to {total}, not 2**n")

    @property
    def q(self) -> int:
        return len(self.values)

    @classmethod
    def from_table(cls, f: FunctionTable) -> FitnessLevels:
        counts: dict = {}
        for v in f.values.tolist():
            counts[v] = counts.get(v, 0) + 1
        values = sorted(counts)
        return cls(tuple(values), tuple(counts[v] for v in values))

    def index(self, value) -> int:
        return self.values.index(value)


@dataclass(frozen=True, eq=False)
class ProbabilityVector:
    entries: np.ndarray
    levels: FitnessLevels | None = field(default=None)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def exact(self) -> bool:
        return self.entries.dtype == object


def mutation_prob(x: BitString, y: BitString, p):
    """Probability that bit-flip mutation with rate ``p`` turns ``x`` into ``y``."""
    check_probability(p)
    d = popcount_int((x ^ y).word)
    return p**d * (1 - p) ** (x.n - d)


def lambda_vector(p, n: int) -> LambdaVector:
    check_probability(p)
    base = 1 - 2 * p
    return LambdaVector(p, n, tuple(base**j for j in range(n + 1)))


def expected_value(components, p):
    """``E[f(M_p(x))]`` from the elementary components ``f_[j](x)``, j = 0..n."""
    lam = lambda_vector(p, len(components) - 1).entries
    return sum(c * l for c, l in zip(components, lam))


def _exact_mode(F: FMatrix, p) -> bool:
    return F.exact and is_exact(p)


def moments(F: FMatrix, p) -> np.ndarray:
    """Vector ``F . Lambda(p)`` of moments 0..m_max of ``f(M_p(x))``."""
    check_probability(p)
    if _exact_mode(F, p):
        lam = np.array(lambda_vector(as_exact(p), F.n).entries, dtype=object)
        return F.entries.dot(lam)
    lam = np.array(lambda_vector(float(p), F.n).entries, dtype=np.float64)
    return F.entries.astype(np.float64) @ lam


def solve_exact(A, b) -> list[Fraction]:
    """Gaussian elimination over the rationals."""
    size = len(b)
    M = [[as_exact(v) for v in row] + [as_exact(rhs)] for row, rhs in zip(A, b)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if M[r][col] != 0), None)
        if pivot is None:
            raise ArithmeticError("singular system (fitness levels not distinct?)")
        M[col], M[pivot] = M[pivot], M[col]
        inv = 1 / M[col][col]
        row_c = M[col]
        for r in range(size):
            if r != col and M[r][col] != 0:
                factor = M[r][col] * inv
                row_r = M[r]
                for k in range(col, size + 1):
                    row_r[k] -= factor * row_c[k]
    return [M[r][size] / M[r][r] for r in range(size)]


def solve_moment_vandermonde(xi, mu) -> np.ndarray:
    """Solve ``sum_i xi_i**m * z_i = mu_m`` (m = 0..q-1) in float arithmetic.

    Bjorck-Pereyra elimination for the dual Vandermonde system, O(q^2) and
    without forming the matrix.
    """
    x = np.asarray(xi, dtype=np.float64)
    b = np.array(mu, dtype=np.float64)
    q = len(x)
    for k in range(q - 1):
        for i in range(q - 1, k, -1):
            b[i] -= x[k] * b[i - 1]
    for k in range(q - 2, -1, -1):
        for i in range(k + 1, q):
            b[i] /= x[i] - x[i - k - 1]
        for i in range(k, q - 1):
            b[i] -= b[i + 1]
    return b


def distribution(F: FMatrix, levels: FitnessLevels, p) -> ProbabilityVector:
    """Probabilities of each fitness level after mutating ``x`` with rate ``p``.

    Exact when both ``F`` and ``p`` are exact; otherwise float, limited to
    ``FLOAT_VANDERMONDE_LIMIT`` levels.
    """
    q = levels.q
    if F.m_max < q - 1:
        raise ValueError(f"F has powers up to {F.m_max}; {q} levels need up to {q - 1}")
    mu = moments(F, p)[:q]
    if _exact_mode(F, p):
        xi = [as_exact(v) for v in levels.values]
        A = [[v**m for v in xi] for m in range(q)]
        pi = np.array(solve_exact(A, mu), dtype=object)
    else:
        if q > FLOAT_VANDERMONDE_LIMIT:
            raise ConditioningError(
                f"{q} levels exceed the float Vandermonde limit {FLOAT_VANDERMONDE_LIMIT}; use exact mode"
            )
        pi = solve_moment_vandermonde([float(v) for v in levels.values], mu)
    return ProbabilityVector(pi, levels)


def cdf(pi: ProbabilityVector) -> ProbabilityVector:
    """Running sums ``Pi_i = P(f(M_p(x)) <= xi_i)``."""
    if pi.exact:
        out = np.empty(len(pi), dtype=object)
        acc = Fraction(0)
        for i, v in enumerate(pi.entries):
            acc += v
            out[i] = acc
    else:
        out = np.cumsum(pi.entries)
    return ProbabilityVector(out, pi.levels)


def improvement_prob(cdf_vec: ProbabilityVector, i: int):
    """Probability of landing strictly above level ``i``."""
    if not 0 <= i < len(cdf_vec):
        raise IndexError(f"level {i} outside 0..{len(cdf_vec) - 1}")
    return 1 - cdf_vec.entries[i]


def build_F_enumerative(f: FunctionTable, m_max: int, x: BitString) -> FMatrix:
    """F matrix at ``x`` from the full table: pointwise powers plus one fast
    Walsh transform per power."""
    n = f.n
    if n > ENUM_LIMIT:
        raise ValueError(f"n={n} exceeds the enumeration limit {ENUM_LIMIT}")
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    if x.n != n:
        raise ValueError(f"length mismatch: {x.n} vs {n}")
    orders = popcounts(n)
    signs = walsh_signs(n, x.word)
    if f.exact:
        fracs = [Fraction(v) for v in f.values]
        den = lcm(*(v.denominator for v in fracs))
        base = [v.numerator * (den // v.denominator) for v in fracs]
        entries = np.empty((m_max + 1, n + 1), dtype=object)
        powered = [1] * len(base)
        for m in range(m_max + 1):
            raw = _kernels.fwht(np.array(powered, dtype=object))
            acc = [0] * (n + 1)
            for order, s, v in zip(orders.tolist(), signs.tolist(), raw):
                acc[order] += v if s > 0 else -v
            scale = (1 << n) * den**m
            for j in range(n + 1):
                entries[m, j] = Fraction(acc[j], scale)
            powered = [a * b for a, b in zip(powered, base)]
        return FMatrix(m_max, n, entries, "enumerative")
    vals = np.asarray(f.values, dtype=np.float64)
    entries = np.zeros((m_max + 1, n + 1))
    powered = np.ones_like(vals)
    for m in range(m_max + 1):
        raw = _kernels.fwht(powered) / float(1 << n)
        entries[m] = np.bincount(orders, weights=raw * signs, minlength=n + 1)
        powered = powered * vals
    return FMatrix(m_max, n, entries, "enumerative")

"""Closed forms for the Onemax family ``f(x) = n - 2|x|``.

Level ``i`` has fitness ``xi_i = 2i - n`` and contains the strings with
``|x| = n - i`` ones, ``binomial(n, i)`` of them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from . import _kernels
from ._scalars import as_exact, check_probability, format_scalar, is_exact
from .bitspace import BitString, popcount_int
from .krawtchouk import build as build_krawtchouk
from .mutation import FMatrix
from .walsh import FunctionTable


def fitness_of_level(n: int, i: int) -> int:
    return 2 * i - n


def level_of_ones(n: int, ones: int) -> int:
    if not 0 <= ones <= n:
        raise IndexError(f"ones={ones} outside 0..{n}")
    return n - ones


def ones_of_level(n: int, i: int) -> int:
    if not 0 <= i <= n:
        raise IndexError(f"level {i} outside 0..{n}")
    return n - i


def level_sizes(n: int) -> tuple[int, ...]:
    return tuple(comb(n, i) for i in range(n + 1))


def onemax_table(n: int) -> FunctionTable:
    return FunctionTable.from_callable(n, lambda x: n - 2 * popcount_int(x.word))


@dataclass(frozen=True, eq=False)
class XiMatrix:
    n: int
    entries: np.ndarray


@dataclass(frozen=True, eq=False)
class VarpiMatrix:
    """``entries[i, j]``: probability of moving from level i to level j."""

    n: int
    p: object
    entries: np.ndarray
    lam: int = 1

    @property
    def exact(self) -> bool:
        return self.entries.dtype == object

    @property
    def q(self) -> int:
        return self.entries.shape[0]

    def to_csv(self) -> str:
        q = self.q
        rows = ["from\\to," + ",".join(str(fitness_of_level(self.n, j)) for j in range(q))]
        for i in range(q):
            rows.append(
                f"{fitness_of_level(self.n, i)}," + ",".join(format_scalar(v) for v in self.entries[i])
            )
        return "\n".join(rows) + "\n"


def xi_matrix(n: int, m_max: int) -> XiMatrix:
    """``Xi[m, j] = 2^-n sum_k (n - 2k)**m K[k, j]`` as exact rationals."""
    if n < 1 or m_max < 0:
        raise ValueError("need n >= 1 and m_max >= 0")
    K = build_krawtchouk(n).entries
    entries = np.empty((m_max + 1, n + 1), dtype=object)
    scale = 1 << n
    for m in range(m_max + 1):
        weights = [(n - 2 * k) ** m for k in range(n + 1)]
        for j in range(n + 1):
            if (m + j) & 1:
                entries[m, j] = Fraction(0)
            else:
                entries[m, j] = Fraction(sum(w * K[k][j] for k, w in enumerate(weights)), scale)
    return XiMatrix(n, entries)


def onemax_F(n: int, ones: int, m_max: int, exact: bool = True) -> FMatrix:
    """``F[m, j] = Xi[m, j] * K[j, ones]``; depends on x only through ``|x|``."""
    if not 0 <= ones <= n:
        raise IndexError(f"ones={ones} outside 0..{n}")
    K = build_krawtchouk(n).entries
    xi = xi_matrix(n, m_max).entries
    entries = np.empty_like(xi)
    for j in range(n + 1):
        entries[:, j] = xi[:, j] * K[j][ones]
    F = FMatrix(m_max, n, entries, "onemax")
    return F if exact else F.as_float()


def varpi_numerators(n: int, p: Fraction) -> tuple[np.ndarray, int]:
    """Integer matrix ``N`` and denominator ``D`` with ``varpi = N / D`` exactly.

    Evaluates ``varpi[i, j] = 2^-n sum_l K[j, l] (1 - 2p)**l K[l, i]`` with
    ``p = a/b`` scaled to integers: ``(1-2p)**l = (b-2a)**l b**(n-l) / b**n``.
    """
    a, b = p.numerator, p.denominator
    K = build_krawtchouk(n).as_array()
    c = np.array([(b - 2 * a) ** l * b ** (n - l) for l in range(n + 1)], dtype=object)
    N = K.dot(c[:, None] * K)
    return N.T.copy(), (1 << n) * b**n


def varpi(n: int, p, method: str = "auto") -> VarpiMatrix:
    """Level transition matrix of the Onemax family under one mutation.

    Exact Krawtchouk evaluation for rational ``p``.  For float ``p`` the default
    is the compiled product-form kernel; ``method="krawtchouk"`` instead
    evaluates the Krawtchouk sum exactly at the binary value of ``p`` and rounds
    once (slow, used as a reference).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    check_probability(p)
    if method == "auto":
        method = "krawtchouk" if is_exact(p) else "factored"
    if method == "krawtchouk":
        pe = as_exact(p)
        N, den = varpi_numerators(n, pe)
        entries = np.empty(N.shape, dtype=object)
        for idx, v in np.ndenumerate(N):
            entries[idx] = Fraction(v, den)
        if not is_exact(p):
            entries = np.array([[v.numerator / v.denominator for v in row] for row in entries])
        return VarpiMatrix(n, p, entries)
    if method == "factored":
        return VarpiMatrix(n, p, _kernels.varpi_factored(n, float(p)))
    raise ValueError(f"unknown method {method!r}")


def family_varpi(n: int, p, direction: str = "increasing", shift: BitString | None = None) -> VarpiMatrix:
    """Transition matrix for ``g(x) = h(|x XOR u|)`` with ``h`` strictly monotone.

    A decreasing ``h`` reverses the level order (rows and columns flip); the
    ``u`` shift commutes with bit-flip mutation and leaves the matrix as is.
    """
    if shift is not None and shift.n != n:
        raise ValueError(f"shift has length {shift.n}, expected {n}")
    base = varpi(n, p)
    if direction == "increasing":
        return base
    if direction == "decreasing":
        return VarpiMatrix(n, p, base.entries[::-1, ::-1].copy())
    raise ValueError(f"direction must be 'increasing' or 'decreasing', got {direction!r}")

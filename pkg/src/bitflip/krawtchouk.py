"""Exact integer Krawtchouk matrices.

``K[r][j]`` is the coefficient of ``x**r`` in ``(1 + x)**(n - j) * (1 - x)**j``.
Rows are built by the Pascal-type recurrence obtained from multiplying the
generating polynomial by ``(1 + x)``; the last column comes from the column
reflection ``K[r][n - j] = (-1)**r * K[r][j]``.  All entries are Python ints.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class KrawtchoukMatrix:
    n: int
    entries: tuple[tuple[int, ...], ...]

    def entry(self, r: int, j: int) -> int:
        return entry(self, r, j)

    def column(self, j: int) -> tuple[int, ...]:
        return column(self, j)

    def row(self, r: int) -> tuple[int, ...]:
        if not 0 <= r <= self.n:
            raise IndexError(f"row {r} outside 0..{self.n}")
        return self.entries[r]

    def as_array(self, dtype=object) -> np.ndarray:
        return np.array(self.entries, dtype=dtype)

    def to_csv(self) -> str:
        lines = [",".join(f"j{j}" for j in range(self.n + 1))]
        lines += [",".join(str(v) for v in row) for row in self.entries]
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=None)
def build(n: int) -> KrawtchoukMatrix:
    """Return the order-``n`` Krawtchouk matrix."""
    if n < 0:
        raise ValueError(f"order must be non-negative, got {n}")
    if n == 0:
        return KrawtchoukMatrix(0, ((1,),))
    for k in range(1, n - 1):
        build(k)  # fill the cache bottom-up, keeps recursion shallow
    prev = build(n - 1).entries
    rows = [[0] * (n + 1) for _ in range(n + 1)]
    for j in range(n):
        for r in range(n + 1):
            above = prev[r][j] if r < n else 0
            left = prev[r - 1][j] if r > 0 else 0
            rows[r][j] = above + left
    for r in range(n + 1):
        rows[r][n] = -rows[r][0] if r & 1 else rows[r][0]
    return KrawtchoukMatrix(n, tuple(tuple(row) for row in rows))


def entry(K: KrawtchoukMatrix, r: int, j: int) -> int:
    if not (0 <= r <= K.n and 0 <= j <= K.n):
        raise IndexError(f"index ({r}, {j}) outside 0..{K.n}")
    return K.entries[r][j]


def column(K: KrawtchoukMatrix, j: int) -> tuple[int, ...]:
    if not 0 <= j <= K.n:
        raise IndexError(f"column {j} outside 0..{K.n}")
    return tuple(row[j] for row in K.entries)

"""MAX-SAT instances and the elementary components of their powers.

A clause ``c`` is stored as two masks: ``v`` marks the variables that occur in
it and ``u`` the ones that occur negated.  ``g_c(x) = 1`` exactly when ``x``
falsifies ``c``, so ``g = sum_c g_c`` counts unsatisfied clauses and the
MAX-SAT objective is ``f = |C| - g``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .bitspace import BitString, popcount_int
from .errors import BudgetExceededError
from .krawtchouk import build as build_krawtchouk
from .mutation import FitnessLevels, FMatrix
from .walsh import FunctionTable

DEFAULT_MMAX = 4
DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class Clause:
    v: BitString
    u: BitString
    is_top: bool = False

    def __post_init__(self):
        if self.v.n != self.u.n:
            raise ValueError("v and u lengths differ")
        if not self.is_top and (self.u & self.v) != self.u:
            raise ValueError("negation mask u must lie inside v")

    @property
    def n(self) -> int:
        return self.v.n

    @property
    def size(self) -> int:
        return popcount_int(self.v.word)

    @classmethod
    def top(cls, n: int) -> Clause:
        return cls(BitString.zeros(n), BitString.zeros(n), True)

    @classmethod
    def empty(cls, n: int) -> Clause:
        return cls(BitString.zeros(n), BitString.zeros(n), False)

    @classmethod
    def from_literals(cls, literals, n: int) -> Clause:
        """Build from DIMACS-style signed 1-based literals."""
        pos = neg = 0
        for lit in literals:
            i = abs(lit)
            if lit == 0 or i > n:
                raise ValueError(f"literal {lit} outside 1..{n}")
            bit = BitString.unit(i, n).word
            if lit > 0:
                pos |= bit
            else:
                neg |= bit
        if pos & neg:
            return cls.top(n)
        return cls(BitString(pos | neg, n), BitString(neg, n))

    def falsified(self, x: BitString) -> int:
        """``g_c(x)``: 1 when every literal of the clause is false."""
        if self.is_top:
            return 0
        return int(((x ^ self.u) & self.v).word == 0)


@dataclass(frozen=True)
class ClauseSet:
    n: int
    clauses: tuple

    def __post_init__(self):
        for c in self.clauses:
            if c.n != self.n:
                raise ValueError(f"clause of length {c.n} in a {self.n}-variable instance")

    def __len__(self) -> int:
        return len(self.clauses)

    def g(self, x: BitString) -> int:
        return sum(c.falsified(x) for c in self.clauses)

    def f(self, x: BitString) -> int:
        return len(self.clauses) - self.g(x)


def parse_dimacs(text) -> ClauseSet:
    """Read a DIMACS CNF instance.

    Duplicate literals inside a clause collapse; a clause holding both ``x_i``
    and ``-x_i`` becomes the tautology.  A clause count that disagrees with the
    header only triggers a warning.
    """
    if isinstance(text, bytes):
        text = text.decode()
    n = declared = None
    clauses = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if n is not None or len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: malformed problem line {line!r}")
            try:
                n, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ValueError(f"line {lineno}: malformed problem line {line!r}") from None
            if n < 1 or declared < 0:
                raise ValueError(f"line {lineno}: bad sizes in {line!r}")
            continue
        if n is None:
            raise ValueError(f"line {lineno}: clause before the problem line")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(Clause.from_literals(pending, n))
                pending = []
            elif abs(lit) > n:
                raise ValueError(f"line {lineno}: variable {abs(lit)} outside 1..{n}")
            else:
                pending.append(lit)
    if n is None:
        raise ValueError("missing 'p cnf' problem line")
    if pending:
        clauses.append(Clause.from_literals(pending, n))
    if len(clauses) != declared:
        warnings.warn(f"header declares {declared} clauses, found {len(clauses)}", stacklevel=2)
    return ClauseSet(n, tuple(clauses))


def clause_walsh_coeff(c: Clause, w: BitString, which: str = "g") -> Fraction:
    """Walsh coefficient of ``g_c`` or ``f_c = 1 - g_c`` at ``w``."""
    if w.n != c.n:
        raise ValueError(f"length mismatch: {w.n} vs {c.n}")
    if which not in ("f", "g"):
        raise ValueError(f"which must be 'f' or 'g', got {which!r}")
    if c.is_top:
        g = Fraction(0)
    elif w.word & ~c.v.word:
        g = Fraction(0)
    else:
        sign = -1 if popcount_int(w.word & c.u.word) & 1 else 1
        g = Fraction(sign, 1 << c.size)
    if which == "g":
        return g
    return (1 if w.word == 0 else 0) - g


def clause_elementary(c: Clause, j: int, x: BitString) -> Fraction:
    """Order-``j`` elementary component of ``g_c`` at ``x``."""
    if not 0 <= j <= c.n:
        raise IndexError(f"order {j} outside 0..{c.n}")
    if c.is_top or j > c.size:
        return Fraction(0)
    d = popcount_int(((x ^ c.u) & c.v).word)
    return Fraction(build_krawtchouk(c.size).entries[j][d], 1 << c.size)


@dataclass(frozen=True, eq=False)
class UpsilonMatrix:
    entries: np.ndarray

    def __getitem__(self, idx):
        return self.entries[idx]


def upsilon(m_max: int, k_max: int) -> UpsilonMatrix:
    """``Y[m, k] = k**m - sum_{l<k} C(k, l) Y[m, l]``, ``Y[m, 0] = [m == 0]``.

    These are the surjection counts from an m-set onto a k-set.
    """
    if m_max < 0 or k_max < 0:
        raise ValueError("m_max and k_max must be non-negative")
    Y = np.zeros((m_max + 1, k_max + 1), dtype=object)
    for m in range(m_max + 1):
        Y[m, 0] = 1 if m == 0 else 0
        for k in range(1, k_max + 1):
            Y[m, k] = k**m - sum(comb(k, l) * Y[m, l] for l in range(k))
    return UpsilonMatrix(Y)


def _join(v1: int, u1: int, v2: int, u2: int):
    """Disjunction of two non-top clauses as masks, or None for the tautology."""
    if (u1 ^ u2) & v1 & v2:
        return None
    return v1 | v2, u1 | u2


def clause_disjunction(W, n: int | None = None) -> Clause:
    """Disjunction of a family of clauses; the empty family gives the empty clause."""
    W = list(W)
    if n is None:
        if not W:
            raise ValueError("n is required for an empty family")
        n = W[0].n
    v = u = 0
    for c in W:
        if c.n != n:
            raise ValueError("clauses of different lengths")
        if c.is_top:
            return Clause.top(n)
        joined = _join(v, u, c.v.word, c.u.word)
        if joined is None:
            return Clause.top(n)
        v, u = joined
    return Clause(BitString(v, n), BitString(u, n))


def subset_count(n_clauses: int, m_max: int) -> int:
    return sum(comb(n_clauses, k) for k in range(min(m_max, n_clauses) + 1))


def maxsat_F(cs: ClauseSet, x: BitString, m_max: int = DEFAULT_MMAX, budget: int = DEFAULT_BUDGET,
             exact: bool = True, stats: dict | None = None) -> FMatrix:
    """F matrix of ``g = sum_c g_c`` at ``x`` by subset enumeration.

    Only families with at most ``m_max`` clauses contribute (``Y[m, k] = 0`` for
    ``k > m``), and once a partial family's disjunction is the tautology its
    whole subtree is skipped.
    """
    n = cs.n
    if m_max < 0:
        raise ValueError("m_max must be non-negative")
    if x.n != n:
        raise ValueError(f"length mismatch: {x.n} vs {n}")
    active = [(c.v.word, c.u.word) for c in cs.clauses if not c.is_top]
    worst = subset_count(len(active), m_max)
    if worst > budget:
        raise BudgetExceededError(f"{worst} clause subsets exceed the budget {budget}")
    Y = upsilon(m_max, m_max).entries
    acc = [[0] * (n + 1) for _ in range(m_max + 1)]
    acc[0][0] = 1 << n  # the empty family
    xw = x.word
    visited = 1
    skipped = 0
    # iterative DFS over increasing clause indices
    stack = [(i + 1, 1, v, u) for i, (v, u) in reversed(list(enumerate(active)))] if m_max else []
    while stack:
        nxt, k, v, u = stack.pop()
        visited += 1
        size = popcount_int(v)
        K = build_krawtchouk(size).entries
        d = popcount_int((xw ^ u) & v)
        scale = 1 << (n - size)
        for m in range(k, m_max + 1):
            y = Y[m, k] * scale
            row = acc[m]
            for j in range(size + 1):
                row[j] += y * K[j][d]
        if k < m_max:
            for i in range(len(active) - 1, nxt - 1, -1):
                joined = _join(v, u, *active[i])
                if joined is None:
                    skipped += 1
                    continue
                stack.append((i + 1, k + 1, *joined))
    if stats is not None:
        stats.update(visited=visited, pruned=skipped, bound=worst)
    den = 1 << n
    if exact:
        entries = np.empty((m_max + 1, n + 1), dtype=object)
        for m in range(m_max + 1):
            for j in range(n + 1):
                entries[m, j] = Fraction(acc[m][j], den)
    else:
        entries = np.array([[a / den for a in row] for row in acc], dtype=np.float64)
    return FMatrix(m_max, n, entries, "maxsat")


def g_table(cs: ClauseSet) -> FunctionTable:
    return FunctionTable.from_callable(cs.n, cs.g)


def f_table(cs: ClauseSet) -> FunctionTable:
    return FunctionTable.from_callable(cs.n, cs.f)


def default_levels(cs: ClauseSet) -> FitnessLevels:
    """Levels ``0..|C|`` of ``g`` (some may be unattained)."""
    return FitnessLevels(tuple(range(len(cs.clauses) + 1)))


def attained_levels(cs: ClauseSet) -> FitnessLevels:
    """Exact level set of ``g`` by enumeration (small n only)."""
    return FitnessLevels.from_table(g_table(cs))

"""Binary hypercube primitives.

Strings are stored as a Python ``int`` word plus a length.  Position 1 is the
leftmost character of the textual form and the most significant bit of the
word, so ``BitString.parse(s).word == int(s, 2)``.  Lookup tables indexed by
solution therefore use ``word`` directly as the index.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator

#: Largest dimension for which operations that enumerate all 2^n strings run.
ENUM_LIMIT = 24


def popcount_int(word: int) -> int:
    return bin(word).count("1")


@dataclass(frozen=True, slots=True)
class BitString:
    """Fixed-length binary word, leftmost bit first."""

    word: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"negative length {self.n}")
        if self.word < 0 or self.word >> self.n:
            raise ValueError(f"word {self.word} does not fit in {self.n} bits")

    @classmethod
    def parse(cls, text: str) -> BitString:
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls(int(text, 2) if text else 0, len(text))

    @classmethod
    def zeros(cls, n: int) -> BitString:
        return cls(0, n)

    @classmethod
    def ones(cls, n: int) -> BitString:
        return cls((1 << n) - 1, n)

    @classmethod
    def unit(cls, i: int, n: int) -> BitString:
        """The string with a single 1 at position ``i`` (1-based, from the left)."""
        if not 1 <= i <= n:
            raise ValueError(f"position {i} outside 1..{n}")
        return cls(1 << (n - i), n)

    def __str__(self) -> str:
        return format(self.word, f"0{self.n}b") if self.n else ""

    def __repr__(self) -> str:
        return f"BitString('{self}')"

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        """Bit at 1-based position ``i``."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return (self.word >> (self.n - i)) & 1

    def _check(self, other: BitString) -> None:
        if other.n != self.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")

    def __xor__(self, other: BitString) -> BitString:
        self._check(other)
        return BitString(self.word ^ other.word, self.n)

    def __and__(self, other: BitString) -> BitString:
        self._check(other)
        return BitString(self.word & other.word, self.n)

    def __or__(self, other: BitString) -> BitString:
        self._check(other)
        return BitString(self.word | other.word, self.n)

    def __invert__(self) -> BitString:
        return BitString(self.word ^ ((1 << self.n) - 1), self.n)


def popcount(x: BitString) -> int:
    """Number of 1-bits of ``x``."""
    return popcount_int(x.word)


def masked_project(x: BitString, t: BitString) -> BitString:
    """Bits of ``x`` at the positions where ``t`` is 1, in position order."""
    x._check(t)
    word = 0
    length = 0
    for i in range(1, x.n + 1):
        if t[i]:
            word = (word << 1) | x[i]
            length += 1
    return BitString(word, length)


def sphere_members(center: BitString, r: int) -> Iterator[BitString]:
    """Lazily yield every string at Hamming distance exactly ``r`` from ``center``."""
    n = center.n
    if not 0 <= r <= n:
        raise ValueError(f"radius {r} outside 0..{n}")
    for positions in combinations(range(n), r):
        mask = 0
        for pos in positions:
            mask |= 1 << pos
        yield BitString(center.word ^ mask, n)


def sphere_size(n: int, r: int) -> int:
    return comb(n, r)


def all_strings(n: int) -> Iterator[BitString]:
    if n > ENUM_LIMIT:
        raise ValueError(f"n={n} exceeds the enumeration limit {ENUM_LIMIT}")
    for word in range(1 << n):
        yield BitString(word, n)

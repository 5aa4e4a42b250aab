"""Walsh functions, Walsh expansions and elementary components."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable

import numpy as np

from . import _kernels
from ._scalars import array_exact, format_scalar, parse_scalar
from .bitspace import ENUM_LIMIT, BitString, popcount_int


def _check_dim(n: int) -> None:
    if n > ENUM_LIMIT:
        raise ValueError(f"n={n} exceeds the enumeration limit {ENUM_LIMIT}")


def popcounts(n: int) -> np.ndarray:
    """``popcounts(n)[w]`` is ``|w|`` for every word of length ``n``."""
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        out += (idx >> b) & 1
    return out


def walsh_signs(n: int, x: int) -> np.ndarray:
    """Vector of ``psi_w(x)`` over all ``w`` (as +1/-1 ints)."""
    idx = np.arange(1 << n, dtype=np.int64)
    return 1 - 2 * (popcounts(n)[idx & x] & 1)


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """Values of a pseudo-Boolean function, indexed by ``BitString.word``."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} values, got {len(self.values)}")

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    @classmethod
    def from_values(cls, n: int, values, exact: bool | None = None) -> FunctionTable:
        vals = list(values)
        if exact is None:
            exact = all(not isinstance(v, float) for v in vals)
        arr = array_exact(vals) if exact else np.asarray(vals, dtype=np.float64)
        return cls(n, arr)

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[BitString], object], exact: bool = True) -> FunctionTable:
        _check_dim(n)
        return cls.from_values(n, (fn(BitString(w, n)) for w in range(1 << n)), exact=exact)

    def __call__(self, x: BitString):
        return self.values[x.word]

    def power(self, m: int) -> FunctionTable:
        if self.exact:
            return FunctionTable(self.n, array_exact([v**m for v in self.values]))
        return FunctionTable(self.n, self.values**m)

    def levels(self) -> list:
        """Sorted distinct values of the function."""
        return sorted(set(self.values.tolist()))


@dataclass(frozen=True, eq=False)
class WalshExpansion:
    n: int
    coeffs: np.ndarray

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    def coefficient(self, w: BitString):
        return self.coeffs[w.word]

    def evaluate(self, x: BitString):
        return self.coeffs @ walsh_signs(self.n, x.word)

    def elementary_components(self, x: BitString) -> np.ndarray:
        return elementary_components(self, x)

    def to_csv(self) -> str:
        rows = ["w,coefficient"]
        for w, a in enumerate(self.coeffs):
            rows.append(f"{BitString(w, self.n)},{format_scalar(a)}")
        return "\n".join(rows) + "\n"


def walsh_eval(w: BitString, x: BitString) -> int:
    """``psi_w(x) = (-1)**|w AND x|``."""
    return -1 if popcount_int((w & x).word) & 1 else 1


def _exact_transform_parts(values: np.ndarray) -> tuple[np.ndarray, int]:
    """Integer butterfly output and the denominator that normalises it."""
    fracs = [Fraction(v) for v in values]
    den = lcm(*(f.denominator for f in fracs)) if fracs else 1
    ints = np.empty(len(fracs), dtype=object)
    for i, f in enumerate(fracs):
        ints[i] = f.numerator * (den // f.denominator)
    return _kernels.fwht(ints), den * len(fracs)


def transform(f: FunctionTable) -> WalshExpansion:
    """All 2^n Walsh coefficients ``a_w = 2^-n <psi_w, f>`` by the fast butterfly."""
    _check_dim(f.n)
    if f.exact:
        raw, den = _exact_transform_parts(f.values)
        coeffs = np.empty(len(raw), dtype=object)
        for i, v in enumerate(raw):
            coeffs[i] = Fraction(v, den)
        return WalshExpansion(f.n, coeffs)
    return WalshExpansion(f.n, _kernels.fwht(f.values) / float(1 << f.n))


def inverse_transform(e: WalshExpansion) -> FunctionTable:
    _check_dim(e.n)
    return FunctionTable(e.n, _kernels.fwht(e.coeffs))


def elementary_components(e: WalshExpansion, x: BitString) -> np.ndarray:
    """``(f_[0](x), ..., f_[n](x))``; the entries sum to ``f(x)``."""
    if x.n != e.n:
        raise ValueError(f"length mismatch: {x.n} vs {e.n}")
    orders = popcounts(e.n)
    signed = e.coeffs * walsh_signs(e.n, x.word)
    if e.exact:
        out = np.empty(e.n + 1, dtype=object)
        out.fill(Fraction(0))
        for order, v in zip(orders.tolist(), signed):
            out[order] += v
        return out
    return np.bincount(orders, weights=signed, minlength=e.n + 1)


def elementary_component(e: WalshExpansion, j: int, x: BitString):
    """Order-``j`` elementary component ``sum_{|w|=j} a_w psi_w(x)``."""
    if not 0 <= j <= e.n:
        raise IndexError(f"order {j} outside 0..{e.n}")
    return elementary_components(e, x)[j]


def read_value_table(text: str, exact: bool = True) -> FunctionTable:
    """Parse ``bitstring,value`` rows (any order, each string exactly once)."""
    entries: dict[int, object] = {}
    n = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(",")
        key = key.strip()
        if any(ch not in "01" for ch in key):
            if not entries:
                continue  # header row
            raise ValueError(f"line {lineno}: bad bit string {key!r}")
        x = BitString.parse(key)
        if n is None:
            n = x.n
        elif x.n != n:
            raise ValueError(f"line {lineno}: length {x.n} differs from {n}")
        if x.word in entries:
            raise ValueError(f"line {lineno}: duplicate string {key}")
        entries[x.word] = parse_scalar(value, exact)
    if n is None:
        raise ValueError("empty value table")
    _check_dim(n)
    if len(entries) != 1 << n:
        raise ValueError(f"table has {len(entries)} rows, expected {1 << n}")
    return FunctionTable.from_values(n, (entries[w] for w in range(1 << n)), exact=exact)

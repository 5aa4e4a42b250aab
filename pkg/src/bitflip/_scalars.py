"""Exact/float scalar plumbing shared by the numeric modules.

Exact mode uses ``fractions.Fraction`` (ints are accepted and promoted) stored
in numpy ``object`` arrays; float mode uses ``float64`` arrays.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np


def is_exact(x) -> bool:
    return isinstance(x, Rational) and not isinstance(x, bool)


def as_exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def parse_scalar(text: str, exact: bool):
    """Parse ``"1/4"``, ``"0.25"`` or ``"3"`` into a Fraction or a float."""
    text = text.strip()
    if exact:
        return Fraction(text)
    if "/" in text:
        return float(Fraction(text))
    return float(text)


def format_scalar(x, digits: int = 12) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), f".{digits}g")


def array_exact(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    for i, v in enumerate(values):
        out[i] = as_exact(v)
    return out


def zeros_like_mode(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def check_probability(p) -> None:
    if not 0 <= p <= 1:
        raise ValueError(f"flip probability {p} outside [0, 1]")

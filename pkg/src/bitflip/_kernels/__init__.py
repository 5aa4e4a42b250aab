"""Hot loops with a compiled backend and a pure-Python fallback.

The Cython extension ``_ckernels`` is used when it was built and importable;
otherwise (or when ``BITFLIP_PURE_PYTHON`` is set to a non-empty value) the
numpy implementations in ``_pykernels`` are used.  ``BACKEND`` names the one
in effect.  Object (exact-scalar) arrays always go through the Python FWHT.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("BITFLIP_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        _ckernels = None
    else:
        _impl = _ckernels
        BACKEND = "cython"
else:
    _ckernels = None


def fwht(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype == object:
        return _pykernels.fwht(arr)
    return _impl.fwht(arr.astype(np.float64, copy=False))


def varpi_factored(n: int, p: float) -> np.ndarray:
    return _impl.varpi_factored(int(n), float(p))


def simulate_onemax_ea(n: int, lam: int, p: float, runs: int, seed: int) -> np.ndarray:
    return _impl.simulate_onemax_ea(int(n), int(lam), float(p), int(runs), int(seed))


__all__ = ["BACKEND", "fwht", "varpi_factored", "simulate_onemax_ea"]

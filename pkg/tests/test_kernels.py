"""Compiled and pure-Python kernels must agree."""
import numpy as np
import pytest

from bitflip import _kernels
from bitflip._kernels import _pykernels

ck = _kernels._ckernels
needs_ext = pytest.mark.skipif(ck is None, reason="compiled extension not built")


def test_python_fwht_is_involution_up_to_scale():
    rng = np.random.default_rng(0)
    v = rng.normal(size=64)
    assert np.allclose(_pykernels.fwht(_pykernels.fwht(v)) / 64, v)


def test_object_fwht_is_exact():
    v = np.array([1, 2, 3, 4], dtype=object)
    assert _kernels.fwht(v).tolist() == [10, -2, -4, 0]


def test_python_varpi_rows_sum_to_one():
    W = _pykernels.varpi_factored(30, 0.07)
    assert np.allclose(W.sum(axis=1), 1.0, atol=1e-13)


def test_prng_reference_values():
    # splitmix64 reference output for seed 0
    state, out = _pykernels.splitmix64(0)
    assert out == 0xE220A8397B1DCDAF


@needs_ext
def test_fwht_parity():
    rng = np.random.default_rng(1)
    v = rng.normal(size=1 << 12)
    assert np.allclose(ck.fwht(v), _pykernels.fwht(v), rtol=0, atol=1e-9)


@needs_ext
@pytest.mark.parametrize("n,p", [(1, 0.3), (17, 0.01), (100, 0.0117), (60, 0.9)])
def test_varpi_parity(n, p):
    assert np.allclose(ck.varpi_factored(n, p), _pykernels.varpi_factored(n, p), rtol=1e-12, atol=1e-300)


@needs_ext
@pytest.mark.parametrize("n,lam,p", [(10, 1, 0.1), (10, 3, 0.2), (25, 2, 0.04)])
def test_simulation_parity(n, lam, p):
    a = ck.simulate_onemax_ea(n, lam, p, 200, 99)
    b = _pykernels.simulate_onemax_ea(n, lam, p, 200, 99)
    assert np.array_equal(a, b)


def test_backend_name():
    assert _kernels.BACKEND in ("cython", "python")

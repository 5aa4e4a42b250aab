"""Time the compiled kernels against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``.  When the extension was not
built only the Python timings are shown.
"""
import argparse
import timeit

import numpy as np

from bitflip import _kernels
from bitflip._kernels import _pykernels

CASES = [
    ("fwht 2^16", "fwht", lambda: (np.random.default_rng(0).normal(size=1 << 16),)),
    ("varpi_factored n=100", "varpi_factored", lambda: (100, 0.01)),
    ("varpi_factored n=400", "varpi_factored", lambda: (400, 0.0025)),
    ("simulate n=50 lam=1 runs=200", "simulate_onemax_ea", lambda: (50, 1, 0.02, 200, 0)),
    ("simulate n=50 lam=8 runs=50", "simulate_onemax_ea", lambda: (50, 8, 0.02, 50, 0)),
]


def best_time(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    ck = _kernels._ckernels
    print(f"{'case':32s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>8s}")
    for label, name, make in CASES:
        inputs = make()
        t_py = best_time(getattr(_pykernels, name), inputs, args.repeat)
        if ck is None:
            print(f"{label:32s} {t_py:12.3e} {'n/a':>12s} {'n/a':>8s}")
            continue
        t_c = best_time(getattr(ck, name), inputs, args.repeat)
        print(f"{label:32s} {t_py:12.3e} {t_c:12.3e} {t_py / t_c:8.1f}")


if __name__ == "__main__":
    main()

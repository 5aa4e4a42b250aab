# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in _pykernels.py."""
import numpy as np

from libc.math cimport floor, log, log1p, pow
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc


cdef uint64_t GOLDEN64 = 0x9E3779B97F4A7C15ULL
cdef uint64_t RUN_STRIDE = 0xD1B54A32D192ED03ULL
cdef double TWO_M53 = 1.0 / 9007199254740992.0


def fwht(values):
    cdef double[::1] a = np.array(values, dtype=np.float64, copy=True)
    cdef Py_ssize_t size = a.shape[0]
    cdef Py_ssize_t h = 1, i, k
    cdef double x, y
    if size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    while h < size:
        i = 0
        while i < size:
            for k in range(i, i + h):
                x = a[k]
                y = a[k + h]
                a[k] = x + y
                a[k + h] = x - y
            i += 2 * h
        h *= 2
    return np.asarray(a)


def varpi_factored(int n, double p):
    cdef double q = 1.0 - p
    out_arr = np.zeros((n + 1, n + 1))
    cdef double[:, ::1] out = out_arr
    binom_arr = np.zeros((n + 1, n + 1))
    cdef double[:, ::1] binom = binom_arr
    cdef double[::1] a = np.empty(n + 1)
    cdef double[::1] b = np.empty(n + 1)
    cdef int i, k, l, ones
    for i in range(n + 1):
        binom[i, 0] = 1.0
        for k in range(1, i + 1):
            binom[i, k] = binom[i - 1, k - 1] + (binom[i - 1, k] if k < i else 0.0)
    for i in range(n + 1):
        ones = n - i
        for k in range(ones + 1):
            a[k] = binom[ones, k] * pow(p, k) * pow(q, ones - k)
        for k in range(i + 1):
            b[k] = binom[i, k] * pow(q, k) * pow(p, i - k)
        for k in range(ones + 1):
            for l in range(i + 1):
                out[i, k + l] += a[k] * b[l]
    return out_arr


cdef inline uint64_t rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t splitmix_next(uint64_t* state) nogil:
    state[0] += GOLDEN64
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t xo_next(uint64_t* s) nogil:
    cdef uint64_t result = rotl(s[1] * 5, 7) * 9
    cdef uint64_t t = s[1] << 17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = rotl(s[3], 45)
    return result


cdef int64_t one_run(int n, int lam, double log_q, uint64_t* s,
                     unsigned char* bits, int* flips, int* best) nogil:
    cdef int i, k, pos, nflips, nbest, child, best_ones
    cdef int ones = 0
    cdef int64_t gens = 0
    cdef double u, gap
    cdef int* tmp
    for i in range(n):
        bits[i] = <unsigned char>(xo_next(s) >> 63)
        ones += bits[i]
    while ones > 0:
        gens += 1
        best_ones = ones
        nbest = 0
        for k in range(lam):
            nflips = 0
            pos = -1
            child = ones
            while True:
                u = (<double>((xo_next(s) >> 11) + 1)) * TWO_M53
                gap = log(u) / log_q
                if gap >= n - pos - 1:
                    break
                pos += <int>floor(gap) + 1
                flips[nflips] = pos
                nflips += 1
                child += 1 - 2 * bits[pos]
            if child < best_ones:
                best_ones = child
                nbest = nflips
                tmp = best
                best = flips
                flips = tmp
        if best_ones < ones:
            for i in range(nbest):
                bits[best[i]] ^= 1
            ones = best_ones
    return gens


def simulate_onemax_ea(int n, int lam, double p, Py_ssize_t runs, seed):
    cdef uint64_t base = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef double log_q = log1p(-p)
    out_arr = np.empty(runs, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef uint64_t s[4]
    cdef uint64_t sm
    cdef Py_ssize_t r
    cdef unsigned char* bits = <unsigned char*>malloc(n * sizeof(unsigned char))
    cdef int* flips = <int*>malloc((n + 1) * sizeof(int))
    cdef int* best = <int*>malloc((n + 1) * sizeof(int))
    if bits == NULL or flips == NULL or best == NULL:
        free(bits); free(flips); free(best)
        raise MemoryError()
    try:
        with nogil:
            for r in range(runs):
                sm = base + <uint64_t>r * RUN_STRIDE
                s[0] = splitmix_next(&sm)
                s[1] = splitmix_next(&sm)
                s[2] = splitmix_next(&sm)
                s[3] = splitmix_next(&sm)
                out[r] = one_run(n, lam, log_q, s, bits, flips, best)
    finally:
        free(bits)
        free(flips)
        free(best)
    return out_arr

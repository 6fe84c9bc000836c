# cython: language_level=3
"""Compiled implementation of the hot kernels.

Must stay bit-identical to `_python.py`: same float64 operation order,
same splitmix64 constants, same tick rounding.
"""

from libc.math cimport ceil

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    static const unsigned long long SPLITMIX_GAMMA = 0x9E3779B97F4B7C15ULL;
    static const unsigned long long MIX1 = 0xBF58476D1CE4E5B9ULL;
    static const unsigned long long MIX2 = 0x94D049BB133111EBULL;
    static const double TWO64 = 18446744073709551616.0;
    """
    unsigned long long SPLITMIX_GAMMA
    unsigned long long MIX1
    unsigned long long MIX2
    double TWO64


def splitmix_expand(seed, Py_ssize_t n):
    """Expand a 64-bit seed into n floats in [0,1) via splitmix64."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef unsigned long long state = <unsigned long long> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef unsigned long long z
    cdef Py_ssize_t i
    for i in range(n):
        state = state + SPLITMIX_GAMMA
        z = state
        z = (z ^ (z >> 30)) * MIX1
        z = (z ^ (z >> 27)) * MIX2
        z = z ^ (z >> 31)
        out[i] = z / TWO64
    return out


def iou_matrix(boxes_a, boxes_b):
    """Pairwise IoU between two (n,4) arrays of (x, y, w, h) boxes."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a = np.ascontiguousarray(
        boxes_a, dtype=np.float64).reshape(-1, 4)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] b = np.ascontiguousarray(
        boxes_b, dtype=np.float64).reshape(-1, 4)
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((na, nb), dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double ax0, ay0, aw, ah, ax1, ay1
    cdef double bx0, by0, bw, bh, bx1, by1
    cdef double iw, ih, inter, union_
    for i in range(na):
        ax0 = a[i, 0]; ay0 = a[i, 1]; aw = a[i, 2]; ah = a[i, 3]
        ax1 = ax0 + aw; ay1 = ay0 + ah
        for j in range(nb):
            bx0 = b[j, 0]; by0 = b[j, 1]; bw = b[j, 2]; bh = b[j, 3]
            bx1 = bx0 + bw; by1 = by0 + bh
            iw = min(ax1, bx1) - max(ax0, bx0)
            ih = min(ay1, by1) - max(ay0, by0)
            if iw <= 0.0 or ih <= 0.0:
                continue
            inter = iw * ih
            union_ = aw * ah + bw * bh - inter
            if union_ > 0.0:
                out[i, j] = inter / union_
    return out


def accumulate_ticks(starts, ends, values, double tick_s, Py_ssize_t n_ticks):
    """Accumulate observation values onto the tick grid (see _python)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s = np.ascontiguousarray(
        starts, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] e = np.ascontiguousarray(
        ends, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v = np.ascontiguousarray(
        values, dtype=np.float64)
    if v.ndim != 2 or not (v.shape[0] == s.shape[0] == e.shape[0]):
        raise ValueError("values must be (n_obs, dim) matching starts/ends")
    cdef Py_ssize_t n_obs = v.shape[0], dim = v.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] sums = np.zeros(
        (n_ticks, dim), dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(n_ticks, dtype=np.int64)
    cdef Py_ssize_t i, k, d, k_lo, k_hi
    for i in range(n_obs):
        k_lo = <Py_ssize_t> ceil(s[i] / tick_s - 0.5)
        k_hi = <Py_ssize_t> ceil(e[i] / tick_s - 0.5)
        if k_lo < 0:
            k_lo = 0
        if k_hi > n_ticks:
            k_hi = n_ticks
        for k in range(k_lo, k_hi):
            for d in range(dim):
                sums[k, d] += v[i, d]
            counts[k] += 1
    return sums, counts

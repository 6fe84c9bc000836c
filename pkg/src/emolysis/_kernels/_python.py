"""Pure-Python/NumPy reference implementation of the hot kernels.

Semantics here are the contract: the Cython extension in `_native.pyx`
must reproduce these results bit-for-bit (same operation order on
float64), which the kernel tests assert.
"""

import math
from typing import Tuple

import numpy as np

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4B7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO64 = float(2**64)


def splitmix_expand(seed: int, n: int) -> np.ndarray:
    """Expand a 64-bit seed into n floats in [0,1) via splitmix64."""
    out = np.empty(n, dtype=np.float64)
    state = seed & _MASK64
    for i in range(n):
        state = (state + _SPLITMIX_GAMMA) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        z = z ^ (z >> 31)
        out[i] = z / _TWO64
    return out


def iou_matrix(boxes_a: np.ndarray, boxes_b: np.ndarray) -> np.ndarray:
    """Pairwise IoU between two (n,4) arrays of (x, y, w, h) boxes."""
    a = np.ascontiguousarray(boxes_a, dtype=np.float64).reshape(-1, 4)
    b = np.ascontiguousarray(boxes_b, dtype=np.float64).reshape(-1, 4)
    out = np.zeros((a.shape[0], b.shape[0]), dtype=np.float64)
    for i in range(a.shape[0]):
        ax0, ay0, aw, ah = a[i]
        ax1, ay1 = ax0 + aw, ay0 + ah
        for j in range(b.shape[0]):
            bx0, by0, bw, bh = b[j]
            bx1, by1 = bx0 + bw, by0 + bh
            iw = min(ax1, bx1) - max(ax0, bx0)
            ih = min(ay1, by1) - max(ay0, by0)
            if iw <= 0.0 or ih <= 0.0:
                continue
            inter = iw * ih
            union = aw * ah + bw * bh - inter
            if union > 0.0:
                out[i, j] = inter / union
    return out


def accumulate_ticks(
    starts: np.ndarray,
    ends: np.ndarray,
    values: np.ndarray,
    tick_s: float,
    n_ticks: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Accumulate observation values onto the tick grid.

    An observation [start, end) contributes its value row to every tick
    whose midpoint (k + 0.5) * tick_s lies inside the interval. Returns
    (sums of shape (n_ticks, dim), counts of shape (n_ticks,)); callers
    divide to obtain uniform averages.
    """
    starts = np.ascontiguousarray(starts, dtype=np.float64)
    ends = np.ascontiguousarray(ends, dtype=np.float64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.ndim != 2 or not (values.shape[0] == starts.shape[0] == ends.shape[0]):
        raise ValueError("values must be (n_obs, dim) matching starts/ends")
    sums = np.zeros((n_ticks, values.shape[1]), dtype=np.float64)
    counts = np.zeros(n_ticks, dtype=np.int64)
    for i in range(starts.shape[0]):
        k_lo = max(math.ceil(starts[i] / tick_s - 0.5), 0)
        k_hi = min(math.ceil(ends[i] / tick_s - 0.5), n_ticks)
        if k_hi > k_lo:
            sums[k_lo:k_hi] += values[i]
            counts[k_lo:k_hi] += 1
    return sums, counts

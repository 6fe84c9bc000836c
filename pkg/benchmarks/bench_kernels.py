#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Usage:
    python benchmarks/bench_kernels.py [--repeat N]

Times the three hot kernels on pipeline-realistic workloads and prints
a table with the speedup of the Cython extension over the fallback.
The workloads mirror what one analysis session actually does: one
splitmix expansion per inference call, one IoU matrix per frame, one
tick accumulation per observation stream.
"""

import argparse
import time

import numpy as np

from emolysis._kernels import _python

try:
    from emolysis._kernels import _native
except ImportError:
    _native = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    rng = np.random.default_rng(0)

    # One reference-backend expansion per crop: ~1500 calls for a 30 s,
    # 25 fps, 2-person clip; scale up to a 10-minute session.
    seeds = rng.integers(0, 2**63, 30000).tolist()

    def splitmix(impl):
        def run():
            for seed in seeds:
                impl.splitmix_expand(seed, 11)
        return run

    # One IoU matrix per frame: 15000 frames of 6 tracks x 8 detections.
    tracks = rng.uniform(0, 1000, (6, 4))
    tracks[:, 2:] = rng.uniform(10, 80, (6, 2))
    dets = rng.uniform(0, 1000, (8, 4))
    dets[:, 2:] = rng.uniform(10, 80, (8, 2))

    def iou(impl):
        def run():
            for _ in range(15000):
                impl.iou_matrix(tracks, dets)
        return run

    # Tick accumulation: an hour-long session, per-frame visual
    # observations onto a 0.25 s grid (90000 obs x 14400 ticks).
    n_obs, n_ticks = 90000, 14400
    starts = np.sort(rng.uniform(0, 3600, n_obs))
    ends = starts + 0.04
    values = rng.uniform(0, 1, (n_obs, 11))

    def accumulate(impl):
        def run():
            impl.accumulate_ticks(starts, ends, values, 0.25, n_ticks)
        return run

    return [
        ("splitmix_expand (30k seeds x 11)", splitmix),
        ("iou_matrix (15k frames, 6x8)", iou),
        ("accumulate_ticks (90k obs)", accumulate),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _native is None:
        print("native kernels not built; showing fallback timings only\n")

    print(f"{'kernel':<36} {'python':>10} {'native':>10} {'speedup':>9}")
    print("-" * 68)
    for name, make in workloads():
        py = timeit(make(_python), args.repeat)
        if _native is not None:
            nat = timeit(make(_native), args.repeat)
            print(f"{name:<36} {py:>9.3f}s {nat:>9.3f}s {py / nat:>8.1f}x")
        else:
            print(f"{name:<36} {py:>9.3f}s {'-':>10} {'-':>9}")


if __name__ == "__main__":
    main()

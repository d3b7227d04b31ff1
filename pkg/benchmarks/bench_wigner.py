#!/usr/bin/env python3
"""Benchmark the Wigner grid kernel: compiled extension vs numpy fallback.

Times the displaced-parity evaluation (the package's hot loop) for a few
state dimensions and grid sizes.  Run from the repo root:

    python3 benchmarks/bench_wigner.py
"""

import math
import time

import numpy as np

from sqring import _kernels, fock
from sqring.fock import FockSpace, SqueezeSpec

CASES = [
    (32, 81),
    (64, 161),
    (96, 161),
    (128, 201),
]
REPEATS = 3


def grid_points(extent, n):
    axis = np.linspace(-extent, extent, n)
    bre, bim = np.meshgrid(axis / math.sqrt(2.0), axis / math.sqrt(2.0), indexing="ij")
    return np.hypot(bre, bim).ravel(), np.arctan2(bim, bre).ravel()


def best_time(fn):
    times = []
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    print(f"selected backend: {_kernels.BACKEND}; threads: {_kernels.thread_count()}")
    have_cython = _kernels.BACKEND == "cython"
    header = f"{'dim':>5} {'grid':>9} {'cython [s]':>11} {'numpy [s]':>11} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for dim, n in CASES:
        state = fock.squeezed_coherent_state(
            FockSpace(dim), SqueezeSpec(0.0, 0.5, 0.0)
        )
        t, theta = grid_points(6.0, n)
        args = (state.amplitudes, t, theta, 1.0 / math.pi)
        # warm up the cached eigensystem so only kernel time is measured
        _kernels.wigner_grid(*args, backend="python")

        t_py = best_time(lambda: _kernels.wigner_grid(*args, backend="python"))
        if have_cython:
            ref = _kernels.wigner_grid(*args, backend="python")
            got = _kernels.wigner_grid(*args, backend="cython")
            assert np.max(np.abs(got - ref)) < 1e-12, "backends disagree"
            t_cy = best_time(lambda: _kernels.wigner_grid(*args, backend="cython"))
            print(f"{dim:>5} {n:>4}x{n:<4} {t_cy:>11.4f} {t_py:>11.4f} {t_py / t_cy:>8.2f}")
        else:
            print(f"{dim:>5} {n:>4}x{n:<4} {'n/a':>11} {t_py:>11.4f} {'n/a':>8}")


if __name__ == "__main__":
    main()

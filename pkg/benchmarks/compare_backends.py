#!/usr/bin/env python3
"""Benchmark the jit kernels against the pure numpy/python fallback.

Both backends are draw-for-draw identical (asserted below); the point of
this script is the speed ratio.  Run directly:

    python3 benchmarks/compare_backends.py
"""

import time

import numpy as np

from ringarw import _kernels_py as kpy
from ringarw.rng import bernoulli_sites, instruction_thresholds, stream_bases_for_sites

try:
    from ringarw import _kernels_jit as kjit
except ImportError:
    kjit = None


def bench_stabilize(kernel, n_sites, zeta, lam, budget, seed=3):
    eta = bernoulli_sites(seed, n_sites, zeta).astype(np.int64)
    bases = stream_bases_for_sites(seed + 1, n_sites)
    ts, tr = instruction_thresholds(lam)
    cursors = np.zeros((n_sites, 3), dtype=np.uint64)
    tags = np.zeros(n_sites, dtype=np.uint8)
    odometer = np.zeros(n_sites, dtype=np.int64)
    t0 = time.perf_counter()
    jumps, consumed, status = kernel.stabilize_ring(
        eta, cursors, tags, bases, np.uint64(ts), np.uint64(tr),
        np.int64(budget), 0, odometer)
    dt = time.perf_counter() - t0
    return dt, int(consumed), (int(jumps), int(consumed), int(status), eta.sum())


def bench_excursions(kernel, samples, seed=9):
    t0 = time.perf_counter()
    out = kernel.excursion_minima(np.uint64(seed), samples, 20)
    dt = time.perf_counter() - t0
    return dt, samples, tuple(np.bincount(out, minlength=22).tolist())


def main():
    if kjit is None:
        print("numba unavailable; nothing to compare")
        return
    budget = 1_000_000
    print(f"{'workload':<34}{'python':>12}{'numba':>12}{'speedup':>10}")

    # warm up the jit once so compilation is not timed
    bench_stabilize(kjit, 64, 0.9, 1.0, 10_000)
    bench_excursions(kjit, 1000)

    dt_py, consumed, fp_py = bench_stabilize(kpy, 2048, 0.9, 1.0, budget)
    dt_jit, _, fp_jit = bench_stabilize(kjit, 2048, 0.9, 1.0, budget)
    assert fp_py == fp_jit, "backends diverged"
    label = f"stabilize {consumed:.1e} instructions"
    print(f"{label:<34}{dt_py:>10.2f}s{dt_jit:>10.3f}s{dt_py / dt_jit:>9.1f}x")

    dt_py, samples, fp_py = bench_excursions(kpy, 200_000)
    dt_jit, _, fp_jit = bench_excursions(kjit, 200_000)
    assert fp_py == fp_jit, "backends diverged"
    label = f"excursion minima {samples:.0e} samples"
    print(f"{label:<34}{dt_py:>10.2f}s{dt_jit:>10.3f}s{dt_py / dt_jit:>9.1f}x")


if __name__ == "__main__":
    main()

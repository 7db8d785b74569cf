"""Pure numpy/python fallback for the hot loops in _kernels_jit.

The stabilizer is an interpreter-speed mirror of the jit kernel (the
toppling order is strictly sequential, so it cannot be vectorized without
changing which instruction lands where).  The excursion sampler is
vectorized across samples; per-sample draw counters advance exactly as in
the jit loop, so results are identical.
"""

from __future__ import annotations

import numpy as np

from .rng import GOLDEN, MASK64, mix64, mix64_array

_U64_GOLDEN = np.uint64(GOLDEN)
_U64_HALF = np.uint64(0x8000000000000000)


def stabilize_ring(eta, cursors, tags, bases, t_sleep, t_right, budget, policy, odometer):
    n = eta.shape[0]
    t_s = int(t_sleep)
    t_r = int(t_right)
    jumps = 0
    consumed = 0
    step = 1 if policy == 0 else -1
    scan = 0 if policy == 0 else n - 1
    while 0 <= scan < n:
        if eta[scan] < 1:
            scan += step
            continue
        site = scan
        tag = tags[site]
        u = mix64((int(bases[site, tag]) + int(cursors[site, tag]) * GOLDEN) & MASK64)
        cursors[site, tag] += np.uint64(1)
        consumed += 1
        odometer[site] += 1
        if u < t_s:
            if eta[site] == 1:
                eta[site] = -1
        else:
            jumps += 1
            if u - t_s < t_r:
                dest = site + 1 if site + 1 < n else 0
            else:
                dest = site - 1 if site > 0 else n - 1
            eta[site] -= 1
            if eta[dest] == -1:
                eta[dest] = 2
            else:
                eta[dest] += 1
            behind = dest < scan if policy == 0 else dest > scan
            if behind and eta[dest] >= 1:
                scan = dest
        if consumed >= budget:
            return jumps, consumed, 1
    return jumps, consumed, 0


def excursion_minima(master, n_samples, max_depth):
    streams = np.arange(n_samples, dtype=np.uint64)
    bases = mix64_array(np.uint64(master) ^ mix64_array(streams + _U64_GOLDEN))
    pos = np.full(n_samples, -1, dtype=np.int64)
    mn = np.full(n_samples, -1, dtype=np.int64)
    out = np.zeros(n_samples, dtype=np.int64)
    active = np.ones(n_samples, dtype=bool)
    floor = -(max_depth + 1)
    k = 0
    while active.any():
        idx = np.nonzero(active)[0]
        u = mix64_array(bases[idx] + np.uint64((k * GOLDEN) & MASK64))
        k += 1
        moves = np.where(u < _U64_HALF, -1, 1)
        pos[idx] += moves
        mn[idx] = np.minimum(mn[idx], pos[idx])
        hit_floor = idx[mn[idx] <= floor]
        out[hit_floor] = max_depth + 1
        active[hit_floor] = False
        returned = idx[pos[idx] == 0]
        out[returned] = -mn[returned]
        active[returned] = False
    return out

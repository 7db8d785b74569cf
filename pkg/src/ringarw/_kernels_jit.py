"""numba-compiled hot loops.

Must stay arithmetic-identical to _kernels_py: both paths draw the same
uint64 per (stream, counter), so configurations, odometers and jump counts
are bit-for-bit equal across backends.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U64_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
U64_HALF = np.uint64(0x8000000000000000)
U64_ONE = np.uint64(1)


@njit(cache=True, inline="always")
def _mix64(x):
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


@njit(cache=True, nogil=True)
def stabilize_ring(eta, cursors, tags, bases, t_sleep, t_right, budget, policy, odometer):
    """Greedy stabilization of a ring configuration.

    eta: int64[n], -1 sleeping / 0 empty / k >= 1 active, mutated in place.
    cursors: uint64[n, 3] per-(site, tag) stream positions, mutated.
    tags: uint8[n], stream tag consumed when the greedy pass topples a site.
    policy: 0 topples the lowest-index unstable site, 1 the highest-index.
    Returns (jumps, consumed, status) with status 1 on budget exhaustion.
    """
    n = eta.shape[0]
    jumps = 0
    consumed = 0
    if policy == 0:
        scan = 0
        while scan < n:
            if eta[scan] < 1:
                scan += 1
                continue
            site = scan
            tag = tags[site]
            u = _mix64(bases[site, tag] + cursors[site, tag] * U64_GOLDEN)
            cursors[site, tag] += U64_ONE
            consumed += 1
            odometer[site] += 1
            if u < t_sleep:
                if eta[site] == 1:
                    eta[site] = -1
            else:
                jumps += 1
                if u - t_sleep < t_right:
                    dest = site + 1
                    if dest == n:
                        dest = 0
                else:
                    dest = site - 1
                    if dest < 0:
                        dest = n - 1
                eta[site] -= 1
                if eta[dest] == -1:
                    eta[dest] = 2
                else:
                    eta[dest] += 1
                if dest < scan and eta[dest] >= 1:
                    scan = dest
            if consumed >= budget:
                return jumps, consumed, 1
        return jumps, consumed, 0
    else:
        scan = n - 1
        while scan >= 0:
            if eta[scan] < 1:
                scan -= 1
                continue
            site = scan
            tag = tags[site]
            u = _mix64(bases[site, tag] + cursors[site, tag] * U64_GOLDEN)
            cursors[site, tag] += U64_ONE
            consumed += 1
            odometer[site] += 1
            if u < t_sleep:
                if eta[site] == 1:
                    eta[site] = -1
            else:
                jumps += 1
                if u - t_sleep < t_right:
                    dest = site + 1
                    if dest == n:
                        dest = 0
                else:
                    dest = site - 1
                    if dest < 0:
                        dest = n - 1
                eta[site] -= 1
                if eta[dest] == -1:
                    eta[dest] = 2
                else:
                    eta[dest] += 1
                if dest > scan and eta[dest] >= 1:
                    scan = dest
            if consumed >= budget:
                return jumps, consumed, 1
        return jumps, consumed, 0


@njit(cache=True, nogil=True)
def excursion_minima(master, n_samples, max_depth):
    """Minimum depth of simple-random-walk excursions forced to step left first.

    Sample j walks from -1 until it returns to 0 or its minimum passes
    -max_depth; returns depth k when the minimum is -k, max_depth + 1 for
    deeper excursions (tail bucket).
    """
    out = np.empty(n_samples, dtype=np.int64)
    floor = -(max_depth + 1)
    m = np.uint64(master)
    for j in range(n_samples):
        base = _mix64(m ^ _mix64(np.uint64(j) + U64_GOLDEN))
        pos = -1
        mn = -1
        k = np.uint64(0)
        while True:
            u = _mix64(base + k * U64_GOLDEN)
            k += U64_ONE
            if u < U64_HALF:
                pos -= 1
                if pos < mn:
                    mn = pos
                    if mn <= floor:
                        out[j] = max_depth + 1
                        break
            else:
                pos += 1
                if pos == 0:
                    out[j] = -mn
                    break
    return out

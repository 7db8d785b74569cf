"""Counter-based instruction streams and seed derivation.

Every random draw in the simulator is a pure function of
(master seed, stream id, counter), so any run can be replayed exactly and
streams never need to be materialized.  The mixer is the splitmix64
finalizer; stream bases are derived by double-mixing so that nearby stream
ids decorrelate.

Instruction distribution at sleep rate lam:
    jump right  1 / (2 (1 + lam))
    jump left   1 / (2 (1 + lam))
    sleep       lam / (1 + lam)
Thresholding is done in integer space (sleep band first) so that lam = 0
never produces a sleep instruction.
"""

from __future__ import annotations

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# instruction codes (shared with the jit kernels, keep as plain ints)
JUMP_RIGHT = 0
JUMP_LEFT = 1
SLEEP = 2

# stream tags per site
TAG_SINGLE = 0
TAG_L = 1
TAG_R = 2


def mix64(x: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    x &= MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK64
    x ^= x >> 31
    return x


def stream_base(master: int, stream_id: int) -> int:
    """Per-stream base value; draw k of the stream is mix64(base + k*GOLDEN)."""
    return mix64((master ^ mix64((stream_id + GOLDEN) & MASK64)) & MASK64)


def draw_u64(master: int, stream_id: int, k: int) -> int:
    return mix64((stream_base(master, stream_id) + k * GOLDEN) & MASK64)


def mix64_array(x: np.ndarray) -> np.ndarray:
    """Vectorized mix64 over a uint64 array."""
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


def instruction_thresholds(lam: float) -> tuple[int, int]:
    """(t_sleep, t_right): u < t_sleep -> sleep, u - t_sleep < t_right -> right."""
    if lam < 0:
        raise ValueError(f"sleep rate must be non-negative, got {lam}")
    p_sleep = lam / (1.0 + lam)
    p_right = 0.5 / (1.0 + lam)
    t_sleep = min(int(p_sleep * 2.0**64), MASK64)
    t_right = min(int(p_right * 2.0**64), MASK64)
    return t_sleep, t_right


def instruction_from_u64(u: int, t_sleep: int, t_right: int) -> int:
    if u < t_sleep:
        return SLEEP
    if u - t_sleep < t_right:
        return JUMP_RIGHT
    return JUMP_LEFT


def derive_seed(master: int, label: str, *parts: int) -> int:
    """Stable named sub-seed (sha256 of the textual key)."""
    key = ":".join([str(master & MASK64), label, *[str(p) for p in parts]])
    digest = hashlib.sha256(key.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def bernoulli_sites(seed: int, n: int, p: float) -> np.ndarray:
    """Deterministic boolean occupancy vector, i.i.d. Bernoulli(p) per site."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"density must lie in (0, 1), got {p}")
    base = np.uint64(stream_base(seed, 0))
    ks = np.arange(n, dtype=np.uint64) * np.uint64(GOLDEN)
    u = mix64_array(base + ks)
    return u < np.uint64(int(p * 2.0**64))


def instruction_stream_id(site: int, tag: int) -> int:
    """Stream id of an instruction stack; tags = TAG_SINGLE / TAG_L / TAG_R."""
    return site * 4 + tag


def stream_bases_for_sites(master: int, n_sites: int) -> np.ndarray:
    """uint64[n_sites, 3] of per-(site, tag) stream bases."""
    out = np.empty((n_sites, 3), dtype=np.uint64)
    for site in range(n_sites):
        for tag in (TAG_SINGLE, TAG_L, TAG_R):
            out[site, tag] = stream_base(master, instruction_stream_id(site, tag))
    return out

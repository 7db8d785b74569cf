"""Bare activated-random-walk model on the ring.

Configurations live on Z_N; each site is empty, holds one sleeping
particle, or holds k >= 1 active particles.  Toppling an unstable site
consumes the next instruction of that site's stack (jump right / jump
left / sleep) and applies it.  Greedy stabilization repeatedly topples
unstable sites in a fixed scan order; by the Abelian property any legal
order yields the same odometer and final configuration, which
check_abelian exercises directly.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass

import numpy as np

from . import kernels
from .rng import (
    GOLDEN,
    JUMP_LEFT,
    JUMP_RIGHT,
    MASK64,
    SLEEP,
    TAG_L,
    TAG_R,
    TAG_SINGLE,
    bernoulli_sites,
    instruction_from_u64,
    instruction_thresholds,
    mix64,
    stream_bases_for_sites,
)

EMPTY = 0
SLEEPING = -1

DEFAULT_BUDGET = 10**9

INSTRUCTION_NAMES = {JUMP_RIGHT: "right", JUMP_LEFT: "left", SLEEP: "sleep"}
TAG_NAMES = {TAG_SINGLE: "single", TAG_L: "L", TAG_R: "R"}


class ParameterError(ValueError):
    """Invalid model or layout parameters."""


class TapeTagError(ValueError):
    """Stream tag does not match the site's stream layout."""


class IllegalToppling(RuntimeError):
    """Attempt to topple a stable site."""


@dataclass
class Configuration:
    """Ring configuration; sites[x] is -1 (sleeping), 0 (empty) or k active."""

    sites: np.ndarray

    def __post_init__(self):
        self.sites = np.asarray(self.sites, dtype=np.int64)

    @classmethod
    def empty(cls, n: int) -> "Configuration":
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def bernoulli(cls, seed: int, n: int, zeta: float) -> "Configuration":
        """i.i.d. Bernoulli(zeta) occupancy, every particle active."""
        occ = bernoulli_sites(seed, n, zeta)
        return cls(occ.astype(np.int64))

    @property
    def ring_size(self) -> int:
        return int(self.sites.shape[0])

    def particle_count(self) -> int:
        s = self.sites
        return int(s[s > 0].sum() + (s == SLEEPING).sum())

    def copy(self) -> "Configuration":
        return Configuration(self.sites.copy())


@dataclass
class JumpCounter:
    total: int = 0


class Tapes:
    """Lazily sampled per-site instruction stacks.

    Sites flagged in dual_mask carry two independent streams (tags L and R);
    all other sites carry a single stream.  Replaying with the same master
    seed reproduces identical streams; cursors only move forward.
    """

    def __init__(self, master: int, lam: float, n_sites: int, dual_mask=None):
        if lam < 0:
            raise ParameterError(f"sleep rate must be non-negative, got {lam}")
        self.master = master & MASK64
        self.lam = float(lam)
        self.n_sites = int(n_sites)
        self.t_sleep, self.t_right = instruction_thresholds(lam)
        if dual_mask is None:
            dual_mask = np.zeros(self.n_sites, dtype=bool)
        self.dual_mask = np.asarray(dual_mask, dtype=bool)
        self.bases = stream_bases_for_sites(self.master, self.n_sites)
        self.cursors = np.zeros((self.n_sites, 3), dtype=np.uint64)

    def _check_tag(self, site: int, tag: int) -> None:
        dual = bool(self.dual_mask[site])
        if dual and tag == TAG_SINGLE:
            raise TapeTagError(f"site {site} carries L/R streams, single tag invalid")
        if not dual and tag != TAG_SINGLE:
            raise TapeTagError(f"site {site} carries a single stream, got tag {TAG_NAMES[tag]}")

    def draw(self, site: int, tag: int = TAG_SINGLE) -> int:
        """Consume and return the next instruction of the (site, tag) stream."""
        self._check_tag(site, tag)
        k = int(self.cursors[site, tag])
        u = mix64((int(self.bases[site, tag]) + k * GOLDEN) & MASK64)
        self.cursors[site, tag] = k + 1
        return instruction_from_u64(u, self.t_sleep, self.t_right)

    def greedy_tags(self) -> np.ndarray:
        """Stream tag the greedy stabilizer consumes at each site."""
        return np.where(self.dual_mask, TAG_L, TAG_SINGLE).astype(np.uint8)

    def consumed_total(self) -> int:
        return int(self.cursors.sum())

    def fresh(self) -> "Tapes":
        """Same streams, cursors rewound to the start."""
        return Tapes(self.master, self.lam, self.n_sites, self.dual_mask.copy())


class ScriptedTapes:
    """Fixed instruction sequences keyed by (site, tag); for tests and replay checks."""

    def __init__(self, n_sites: int, scripts: dict, lam: float = 1.0):
        self.n_sites = n_sites
        self.lam = lam
        self.dual_mask = np.zeros(n_sites, dtype=bool)
        self._scripts = {}
        for key, seq in scripts.items():
            site, tag = key if isinstance(key, tuple) else (key, TAG_SINGLE)
            self._scripts[(site, tag)] = list(seq)
        self.cursors = np.zeros((n_sites, 3), dtype=np.uint64)

    def draw(self, site: int, tag: int = TAG_SINGLE) -> int:
        key = (site, tag)
        k = int(self.cursors[site, tag])
        seq = self._scripts.get(key, ())
        if k >= len(seq):
            raise RuntimeError(f"scripted tape exhausted at site {site} tag {TAG_NAMES[tag]}")
        self.cursors[site, tag] = k + 1
        return seq[k]

    def greedy_tags(self) -> np.ndarray:
        return np.zeros(self.n_sites, dtype=np.uint8)

    def consumed_total(self) -> int:
        return int(self.cursors.sum())

    def fresh(self) -> "ScriptedTapes":
        return ScriptedTapes(self.n_sites, dict(self._scripts), self.lam)


def sample_instruction(tapes, site: int, tag: int = TAG_SINGLE) -> int:
    """Next unconsumed instruction of the designated stream; advances its cursor."""
    return tapes.draw(site, tag)


def is_stable(config: Configuration, site: int) -> bool:
    return config.sites[site] <= 0


def is_stable_config(config: Configuration) -> bool:
    return bool((config.sites <= 0).all())


def apply_instruction(config: Configuration, site: int, instr: int) -> Configuration:
    """Apply one instruction at an unstable site, in place.

    A jump moves one particle to the neighbor (landing on a sleeper wakes
    it: s + 1 = 2); sleep converts a lone active particle and is a
    consumed no-op otherwise.
    """
    s = config.sites
    if s[site] < 1:
        raise IllegalToppling(f"site {site} is stable (state {int(s[site])})")
    n = s.shape[0]
    if instr == SLEEP:
        if s[site] == 1:
            s[site] = SLEEPING
    else:
        dest = (site + 1) % n if instr == JUMP_RIGHT else (site - 1) % n
        s[site] -= 1
        s[dest] = 2 if s[dest] == SLEEPING else s[dest] + 1
    return config


def topple(config, tapes, site, tag=TAG_SINGLE, odometer=None, counter=None, trace=None, step=0):
    """Consume one instruction at an unstable site and apply it.

    Returns (instruction, jumped).  Updates the odometer entry and the jump
    counter when provided.
    """
    if config.sites[site] < 1:
        raise IllegalToppling(f"site {site} is stable, toppling is not legal")
    instr = tapes.draw(site, tag)
    apply_instruction(config, site, instr)
    jumped = instr != SLEEP
    if odometer is not None:
        odometer[site] += 1
    if counter is not None and jumped:
        counter.total += 1
    if trace is not None:
        state = int(config.sites[site])
        trace.write(
            f"{step}\t{site}\t{INSTRUCTION_NAMES[instr]}\t{TAG_NAMES[tag]}\t"
            f"{'s' if state == SLEEPING else state}\n"
        )
    return instr, jumped


@dataclass
class StabilizeResult:
    config: Configuration
    odometer: np.ndarray
    jumps: int
    consumed: int
    exhausted: bool = False

    @property
    def ok(self) -> bool:
        return not self.exhausted


def _stabilize_python(config, tapes, policy, budget, trace, policy_seed):
    n = config.ring_size
    odometer = np.zeros(n, dtype=np.int64)
    counter = JumpCounter()
    tags = tapes.greedy_tags()
    consumed = 0
    rng = _random.Random(policy_seed) if policy == "random" else None

    def unstable_sites():
        return np.nonzero(config.sites >= 1)[0]

    while True:
        us = unstable_sites()
        if us.size == 0:
            return StabilizeResult(config, odometer, counter.total, consumed, False)
        if policy == "lowest":
            site = int(us[0])
        elif policy == "highest":
            site = int(us[-1])
        elif policy == "random":
            site = int(rng.choice(list(us)))
        else:
            raise ParameterError(f"unknown toppling policy {policy!r}")
        topple(config, tapes, site, int(tags[site]), odometer, counter, trace, consumed)
        consumed += 1
        if consumed >= budget:
            return StabilizeResult(config, odometer, counter.total, consumed, True)


def stabilize_greedy(config, tapes, policy="lowest", budget=DEFAULT_BUDGET,
                     trace=None, policy_seed=0):
    """Stabilize by repeatedly toppling unstable sites in scan order.

    policy "lowest" / "highest" picks the lowest/highest-index unstable
    site ("random" draws uniformly; python path only).  On a counter-based
    Tapes without tracing, the lowest/highest policies run in the compiled
    kernel.  A budget overrun returns the partial state flagged exhausted.
    """
    fast = isinstance(tapes, Tapes) and trace is None and policy in ("lowest", "highest")
    if not fast:
        return _stabilize_python(config, tapes, policy, budget, trace, policy_seed)
    odometer = np.zeros(config.ring_size, dtype=np.int64)
    jumps, consumed, status = kernels.stabilize_ring(
        config.sites,
        tapes.cursors,
        tapes.greedy_tags(),
        tapes.bases,
        np.uint64(tapes.t_sleep),
        np.uint64(tapes.t_right),
        np.int64(budget),
        0 if policy == "lowest" else 1,
        odometer,
    )
    return StabilizeResult(config, odometer, int(jumps), int(consumed), status == 1)


def preprocess_multi(config, tapes, budget=DEFAULT_BUDGET):
    """Topple sites holding >= 2 particles until every site holds at most one.

    Any legal toppling order gives the same result; the lowest-index site is
    toppled for reproducibility.
    """
    odometer = np.zeros(config.ring_size, dtype=np.int64)
    counter = JumpCounter()
    tags = tapes.greedy_tags()
    consumed = 0
    while True:
        multi = np.nonzero(config.sites >= 2)[0]
        if multi.size == 0:
            return StabilizeResult(config, odometer, counter.total, consumed, False)
        topple(config, tapes, int(multi[0]), int(tags[multi[0]]), odometer, counter)
        consumed += 1
        if consumed >= budget:
            return StabilizeResult(config, odometer, counter.total, consumed, True)


def check_abelian(config, tapes, policy_a="lowest", policy_b="highest",
                  budget=DEFAULT_BUDGET, policy_seeds=(0, 1)):
    """Stabilize twice with different legal policies on the same streams.

    Returns True when odometers and final configurations agree exactly,
    False when they differ, None when either run exhausts the budget
    (inconclusive).
    """
    res_a = stabilize_greedy(config.copy(), tapes.fresh(), policy_a, budget,
                             policy_seed=policy_seeds[0])
    res_b = stabilize_greedy(config.copy(), tapes.fresh(), policy_b, budget,
                             policy_seed=policy_seeds[1])
    if res_a.exhausted or res_b.exhausted:
        return None
    same = (
        np.array_equal(res_a.odometer, res_b.odometer)
        and np.array_equal(res_a.config.sites, res_b.config.sites)
        and res_a.jumps == res_b.jumps
    )
    return bool(same)

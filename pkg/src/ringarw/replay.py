"""Coupled replay: leftward flow out of a block is invariant under truncation.

During a full mode, activity in blocks above k can influence blocks
0..k only through the boundary: particles arriving into block k (fixing
defects, parking at the vacant hole, or waiting at the zone top) and, when
block k is defective, walks that cross into its zone and consume its
single-stream instructions.  The directional corridor streams isolate
everything else.

The recorder captures exactly that boundary data per k while a mode runs.
The replay then rebuilds the mode from the same seed with hot-particle
choice restricted to blocks 1..k, applying the recorded boundary events
whenever the restricted system stalls; recorded zone entries are re-walked
as "ghost" particles on the same instruction streams.  If the isolation
discipline is implemented correctly, block k's flow counters (L, R, D) and
its frozen count S come out identical to the full run.
"""

from __future__ import annotations

from collections import deque

from .carpet import (
    BudgetExhausted,
    EngineBug,
    attempted_emission,
    build_layout,
    choose_hot,
    init_first_mode,
    run_mode,
    receive_particle,
)
from .rng import JUMP_RIGHT, SLEEP


class ReplayDivergence(RuntimeError):
    """Replay disagreed with the recorded boundary data."""


class FlowRecorder:
    """Collects per-boundary foreign events while a full mode runs.

    Event kinds, all appended in chronological order:
      ("enter",)                        walker from block k+1 starts toppling
                                        inside region k (at block k's zone top)
      ("absorb", lcoord, kind, in_)     walker from block k+1 lands in block k
      ("rabsorb", lcoord, kind)         walker from block k+2 lands in block k+1
    """

    def __init__(self, layout):
        self.layout = layout
        self.logs = {k: [] for k in range(1, layout.n + 1)}
        self._origin = None
        self._in_region = False

    def on_attempt_start(self, state, origin_logical):
        self._origin = origin_logical
        self._in_region = False

    def on_topple(self, state, site):
        j = self._origin
        if j is None:
            return
        k = j - 1
        if k < 1:
            return
        if state.lcoord(site) <= k * self.layout.K + self.layout.a:
            if not self._in_region:
                self.logs[k].append(("enter",))
                self._in_region = True
        else:
            self._in_region = False

    def on_emission(self, state, origin_logical, site, kind, leftward):
        if leftward:
            j = origin_logical
            lc = state.lcoord(site)
            if 1 <= j - 1 <= self.layout.n:
                self.logs[j - 1].append(("absorb", lc, kind, self._in_region))
            if 1 <= j - 2 <= self.layout.n:
                self.logs[j - 2].append(("rabsorb", lc, kind))
        self._in_region = False
        self._origin = None


def _apply_direct_arrival(state, k_receiver_logical, lcoord, expect_kind):
    """Land a logged foreign particle without consuming any instructions."""
    receiver = state.phys(k_receiver_logical)
    origin = state.phys(k_receiver_logical + 1)
    site = lcoord % state.layout.N
    kind = receive_particle(state, origin, receiver, site, leftward=True)
    if kind != expect_kind:
        raise ReplayDivergence(
            f"arrival at site {site} classified {kind}, recorded {expect_kind}")


def _ghost_walk(state, k, queue):
    """Re-walk a recorded zone entry of block k on the live streams.

    The ghost starts by toppling the zone top and moves per the consumed
    instructions until it either exits right (its later fate is carried by
    subsequent log events) or lands on a vacancy of block k, which must
    match the next recorded absorb event.
    """
    pk = state.phys(k)
    top = state.top(pk)
    left_edge = pk * state.layout.K - state.layout.K // 2
    origin = state.phys(k + 1)
    pos = top
    while True:
        instr = state.consume(pos, origin)
        if instr == SLEEP:
            if state.eta(pos) == 0:
                raise EngineBug("ghost walker alone on a vacant site")
            continue
        newpos = pos + 1 if instr == JUMP_RIGHT else pos - 1
        if newpos > top:
            return
        if newpos < left_edge:
            raise EngineBug("ghost walker left the receiving block")
        if state.vacant(newpos):
            if not queue:
                raise ReplayDivergence("ghost absorbed but no recorded arrival")
            ev = queue.popleft()
            if ev[0] != "absorb" or not ev[3]:
                raise ReplayDivergence(f"ghost absorbed, next event {ev}")
            if ev[1] % state.layout.N != newpos:
                raise ReplayDivergence(
                    f"ghost landed at {newpos}, recorded {ev[1] % state.layout.N}")
            _apply_direct_arrival(state, k, ev[1], ev[2])
            return
        pos = newpos
        state.wake(pos)


def replay_restricted(zeta, layout, lam, seed, k, log, budget=None):
    """Re-run the mode from the same seed with choice limited to blocks 1..k.

    Returns (L, R, D, S) of logical block k at the end.
    """
    state = init_first_mode(zeta, layout, lam, seed, budget=budget)
    queue = deque(log)
    while True:
        if choose_hot(state, max_block=k) is not None:
            attempted_emission(state, max_block=k)
            continue
        if not queue:
            break
        ev = queue.popleft()
        if ev[0] == "enter":
            _ghost_walk(state, k, queue)
        elif ev[0] == "absorb":
            if ev[3]:
                raise ReplayDivergence("in-walk arrival not consumed by a ghost walk")
            _apply_direct_arrival(state, k, ev[1], ev[2])
        elif ev[0] == "rabsorb":
            _apply_direct_arrival(state, k + 1, ev[1], ev[2])
        else:
            raise EngineBug(f"unknown event {ev}")
    pk = state.phys(k)
    return (
        int(state.flow_L[pk]),
        int(state.flow_R[pk]),
        int(state.flow_D[pk]),
        int(state.frozen[pk]),
    )


def verify_flow_invariance(n, a, lam, zeta, seed, budget=None):
    """Record one full mode, then check every truncated replay against it.

    Returns True when L, R, D and S of every block 1..n match the full
    run exactly, False on any mismatch, None when a budget cut the full
    run short (inconclusive).
    """
    layout = build_layout(n, a)
    state = init_first_mode(zeta, layout, lam, seed, budget=budget)
    recorder = FlowRecorder(layout)
    state.recorder = recorder
    try:
        report = run_mode(state)
    except BudgetExhausted:
        return None
    if report.inconclusive:
        return None
    for k in range(1, n + 1):
        expected = (report.L[k], report.R[k], report.D[k], report.S[k])
        try:
            got = replay_restricted(zeta, layout, lam, seed, k, recorder.logs[k])
        except (ReplayDivergence, EngineBug):
            return False
        if got != expected:
            return False
    return True

"""Structured carpet toppling procedure on the block-partitioned ring.

The ring of N = (n+2)*K sites (K = a*a) is split into n+2 blocks of K
sites centered at the multiples of K.  Each block owns one hole confined
to its zone [base, base+a]; every non-hole, non-defective site carries a
carpet particle.  Free particles wait at block bases and zone tops; one
hot particle at a time random-walks until it is emitted into a neighbor
block or the attempt fails.  The hole drifts right when the hot particle
sleeps in it and jumps left to the clamped minimum of an excursion that
returns to it; a hole that reaches the zone top freezes a free particle
there until a later walk sweeps the whole zone.

Sites keep a single instruction stream inside zones and a directional
pair (L/R) in the corridors between zones: a walker consumes the L stream
of a corridor when its origin block lies to the corridor's left and the R
stream otherwise.  This makes the leftward flow out of a block depend
only on streams to its left, which verify_flow_invariance (replay module)
checks operationally.

Labels (carpet / free, frozen / thawed, hot) are bookkeeping over an
ordinary ring configuration; free particles are interchangeable, so the
state tracks per-site counts rather than particle identities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import Configuration, ParameterError, StabilizeResult, Tapes
from .rng import (
    JUMP_RIGHT,
    SLEEP,
    TAG_L,
    TAG_R,
    TAG_SINGLE,
    bernoulli_sites,
    derive_seed,
)

OUTCOME_LEFT = "emitted_left"
OUTCOME_RIGHT = "emitted_right"
OUTCOME_FAILURE = "failure"

CARPET_NONE = 0
CARPET_ACTIVE = 1
CARPET_SLEEPING = 2

PROPERTY_IDS = ("P1", "P2", "P4", "P5", "P6", "P7", "P8", "P9", "P10")


class EngineBug(RuntimeError):
    """Internal consistency violation; never a valid run outcome."""


class PropertyViolation(RuntimeError):
    def __init__(self, violated, context=""):
        self.violated = list(violated)
        super().__init__(f"state invariants violated: {self.violated} {context}")


class BudgetExhausted(RuntimeError):
    """Instruction budget ran out mid-procedure; partial state is on the state object."""


@dataclass(frozen=True)
class BlockLayout:
    """Ring geometry: n interior blocks plus two sinks, block width K = a*a."""

    n: int
    a: int

    def __post_init__(self):
        if self.n < 2 or self.n % 2 != 0:
            raise ParameterError(f"n must be even and >= 2, got {self.n}")
        if self.a < 2 or self.a % 2 != 0:
            raise ParameterError(f"a must be even and >= 2, got {self.a}")

    @property
    def K(self) -> int:
        return self.a * self.a

    @property
    def N(self) -> int:
        return (self.n + 2) * self.K

    @property
    def n_blocks(self) -> int:
        return self.n + 2

    def require_procedure_geometry(self) -> None:
        # zone [base, base+a] must sit strictly inside the block's right half
        if self.a < 4:
            raise ParameterError(f"procedure needs a >= 4 so the hole zone fits in a block, got a={self.a}")


def build_layout(n: int, a: int) -> BlockLayout:
    return BlockLayout(n, a)


@dataclass
class ModeReport:
    """Flat per-mode record plus per-logical-block counters."""

    mode: int
    emissions: int
    free: int
    frozen: int
    defects: int
    J_delta: int
    condition1: bool
    F_En: int
    F_total: int
    L: list
    R: list
    D: list
    M: list
    S: list
    emitted_blocks: list
    conserved: bool
    inconclusive: bool = False

    def as_row(self) -> dict:
        row = {
            "mode": self.mode,
            "emissions": self.emissions,
            "free": self.free,
            "frozen": self.frozen,
            "defects": self.defects,
            "J_delta": self.J_delta,
            "condition1": int(self.condition1),
            "F_En": self.F_En,
            "F_total": self.F_total,
        }
        for name, arr in (("L", self.L), ("R", self.R), ("D", self.D), ("M", self.M), ("S", self.S)):
            for i, v in enumerate(arr):
                row[f"{name}[{i}]"] = v
        return row


class CarpetState:
    """Full procedure state over physical sites, with a rotating label offset."""

    def __init__(self, layout: BlockLayout, tapes: Tapes, budget=None):
        layout.require_procedure_geometry()
        self.layout = layout
        self.tapes = tapes
        n = layout.N
        nb = layout.n_blocks
        self.offset = 0
        self.carpet = np.zeros(n, dtype=np.int8)
        self.thawed = np.zeros(n, dtype=np.int64)
        self.frozen = np.zeros(nb, dtype=np.int8)
        self.hole = np.zeros(nb, dtype=np.int64)
        self.is_defect = np.zeros(n, dtype=bool)
        self.defect_count = np.zeros(nb, dtype=np.int64)
        self.odometer = np.zeros(n, dtype=np.int64)
        self.jumps = 0
        self.consumed = 0
        self.budget = budget
        self.mode_index = 0
        self.attempt_index = 0
        # per-mode flow tallies, physical-block indexed
        self.flow_L = np.zeros(nb, dtype=np.int64)
        self.flow_R = np.zeros(nb, dtype=np.int64)
        self.flow_D = np.zeros(nb, dtype=np.int64)
        self.flow_M = np.zeros(nb, dtype=np.int64)
        self.emitted_flag = np.zeros(nb, dtype=bool)
        self.hole_trace = None  # list of dicts when tracing is enabled
        self.recorder = None  # replay recorder hook
        self.hot_active = False

    # -- geometry ---------------------------------------------------------

    def phys(self, logical: int) -> int:
        return (logical + self.offset) % self.layout.n_blocks

    def logical(self, block: int) -> int:
        return (block - self.offset) % self.layout.n_blocks

    def block_of(self, site: int) -> int:
        K = self.layout.K
        return ((site + K // 2) // K) % self.layout.n_blocks

    def base(self, block: int) -> int:
        return block * self.layout.K

    def top(self, block: int) -> int:
        return block * self.layout.K + self.layout.a

    def lcoord(self, site: int) -> int:
        """Logical coordinate: logical block index times K plus in-block offset."""
        K, N = self.layout.K, self.layout.N
        b = self.block_of(site)
        delta = site - self.base(b)
        if delta >= K // 2:
            delta -= N
        elif delta < -(K // 2):
            delta += N
        return self.logical(b) * K + delta

    def stream_tag(self, site: int, origin_block: int) -> int:
        """Stream tag an origin_block walker consumes at site."""
        if site % self.layout.K <= self.layout.a:
            return TAG_SINGLE
        corridor = site // self.layout.K
        rel = (corridor - origin_block) % self.layout.n_blocks
        if rel <= 1:
            return TAG_L
        if rel >= self.layout.n_blocks - 2:
            return TAG_R
        raise EngineBug(f"walker from block {origin_block} toppling corridor {corridor}")

    # -- occupancy --------------------------------------------------------

    def frozen_here(self, site: int) -> bool:
        b = self.block_of(site)
        return bool(self.frozen[b]) and site == self.top(b)

    def eta(self, site: int) -> int:
        """Occupancy exclusive of any walker in flight; -1 denotes a sleeper."""
        if self.carpet[site] == CARPET_SLEEPING:
            return -1
        count = int(self.thawed[site])
        if self.carpet[site] == CARPET_ACTIVE:
            count += 1
        if self.frozen_here(site):
            count += 1
        return count

    def vacant(self, site: int) -> bool:
        return self.eta(site) == 0

    def wake(self, site: int) -> None:
        if self.carpet[site] == CARPET_SLEEPING:
            self.carpet[site] = CARPET_ACTIVE

    def free_total(self) -> int:
        return int(self.thawed.sum() + self.frozen.sum())

    def frozen_total(self) -> int:
        return int(self.frozen.sum())

    def defect_total(self) -> int:
        return int(self.defect_count.sum())

    # -- instruction consumption ------------------------------------------

    def consume(self, site: int, origin_block: int) -> int:
        # raise before drawing so every counted instruction was also applied
        if self.budget is not None and self.consumed >= self.budget:
            raise BudgetExhausted(f"instruction budget {self.budget} exhausted")
        tag = self.stream_tag(site, origin_block)
        instr = self.tapes.draw(site, tag)
        self.odometer[site] += 1
        self.consumed += 1
        if instr != SLEEP:
            self.jumps += 1
        if self.recorder is not None:
            self.recorder.on_topple(self, site)
        return instr

    def to_configuration(self) -> Configuration:
        sites = np.empty(self.layout.N, dtype=np.int64)
        for x in range(self.layout.N):
            sites[x] = self.eta(x)
        return Configuration(sites)


def init_first_mode(zeta: float, layout: BlockLayout, lam: float, seed: int,
                    budget=None) -> CarpetState:
    """Bernoulli(zeta) active particles; frees at block bases, holes at bases.

    Empty non-base sites are registered as defects.  All state invariants
    hold immediately after initialization.
    """
    if not 0.0 < zeta < 1.0:
        raise ParameterError(f"density must lie in (0, 1), got {zeta}")
    N, K = layout.N, layout.K
    dual = (np.arange(N) % K) > layout.a
    tapes = Tapes(derive_seed(seed, "tapes"), lam, N, dual_mask=dual)
    state = CarpetState(layout, tapes, budget=budget)
    occ = bernoulli_sites(derive_seed(seed, "occupancy"), N, zeta)
    for b in range(layout.n_blocks):
        state.hole[b] = state.base(b)
    for x in range(N):
        if occ[x]:
            if x % K == 0:
                state.thawed[x] = 1
            else:
                state.carpet[x] = CARPET_ACTIVE
        elif x % K != 0:
            state.is_defect[x] = True
            state.defect_count[state.block_of(x)] += 1
    return state


def choose_hot(state: CarpetState, max_block=None):
    """Smallest eligible logical block (no defects, a thawed free available).

    Prefers the free at the block base over the zone top; sinks (logical 0
    and n+1) are never chosen.  None means the procedure is finished.
    max_block restricts the scan to logical blocks 1..max_block.
    """
    upper = state.layout.n if max_block is None else max_block
    for i in range(1, upper + 1):
        b = state.phys(i)
        if state.defect_count[b] != 0:
            continue
        if state.thawed[state.base(b)] > 0:
            return i, state.base(b)
        if state.thawed[state.top(b)] > 0:
            return i, state.top(b)
    return None


def receive_particle(state: CarpetState, origin: int, receiver: int, site: int, leftward: bool):
    """Land an emitted particle; returns the landing kind for the recorder."""
    if state.defect_count[receiver] == 0:
        state.thawed[site] += 1
        state.wake(site)
        if leftward:
            state.flow_M[receiver] += 1
        return "park_top" if site == state.top(receiver) else "park_base"
    if not state.vacant(site):
        raise EngineBug(f"landing on occupied site {site} of defective block {receiver}")
    if site == state.hole[receiver]:
        if site != state.base(receiver):
            raise EngineBug("defective block with hole away from base")
        state.thawed[site] += 1
        if leftward:
            state.flow_D[receiver] += 1
        return "park_hole"
    if not state.is_defect[site]:
        raise EngineBug(f"vacant non-hole site {site} not registered as defect")
    state.is_defect[site] = False
    state.defect_count[receiver] -= 1
    state.carpet[site] = CARPET_ACTIVE
    if leftward:
        state.flow_D[receiver] += 1
    return "fix"


def _absorption(state: CarpetState, origin: int, newpos: int):
    """Emission test for a step onto newpos by an origin-block walker.

    Returns (receiver, leftward) when the step completes an emission,
    None when the walk continues.  Clean receivers absorb exactly at their
    target site (base for rightward, zone top for leftward); defective
    receivers absorb at any vacant site.
    """
    nb = state.block_of(newpos)
    if nb == origin:
        return None
    rel = (nb - origin) % state.layout.n_blocks
    if rel == 1:
        leftward = False
        target = state.base(nb)
    elif rel == state.layout.n_blocks - 1:
        leftward = True
        target = state.top(nb)
    else:
        raise EngineBug(f"walker from block {origin} reached block {nb}")
    if state.defect_count[nb] == 0:
        if newpos == target:
            return nb, leftward
        if state.vacant(newpos):
            raise EngineBug(f"vacant site {newpos} before target in clean block {nb}")
        return None
    if state.vacant(newpos):
        return nb, leftward
    return None


def _finish_emission(state, origin, receiver, site, leftward, origin_logical):
    kind = receive_particle(state, origin, receiver, site, leftward)
    if leftward:
        state.flow_L[origin] += 1
    else:
        state.flow_R[origin] += 1
    state.emitted_flag[origin] = True
    if state.recorder is not None:
        state.recorder.on_emission(state, origin_logical, site, kind, leftward)
    return OUTCOME_LEFT if leftward else OUTCOME_RIGHT


def attempted_emission(state: CarpetState, max_block=None):
    """Run one attempted emission; returns its outcome string.

    Requires an eligible block (see choose_hot).  All state invariants hold
    again on return.
    """
    sel = choose_hot(state, max_block)
    if sel is None:
        raise EngineBug("attempted emission with no eligible block")
    i_logical, start = sel
    b = state.phys(i_logical)
    base, top = state.base(b), state.top(b)
    if state.recorder is not None:
        state.recorder.on_attempt_start(state, i_logical)
    state.thawed[start] -= 1
    state.hot_active = True
    steps = 0  # hole-decision events: sleeps + excursion returns + terminal emission
    try:
        if state.frozen[b]:
            outcome, steps = _frozen_branch_walk(state, i_logical, b, base, top, start)
        else:
            outcome, steps = _hole_branch_walk(state, i_logical, b, base, top, start)
    except BudgetExhausted:
        # keep the truncated state particle-conserving: the walker in flight
        # is put back where the attempt picked it up
        state.thawed[start] += 1
        raise
    finally:
        state.hot_active = False
    state.attempt_index += 1
    if state.hole_trace is not None:
        # pblock keeps the physical block identity stable across relabelings
        state.hole_trace.append({
            "block": i_logical,
            "pblock": b,
            "j": state.attempt_index,
            "H": int(state.hole[b] - base),
            "T": steps,
            "outcome": outcome,
        })
    return outcome


def _frozen_branch_walk(state, i_logical, b, base, top, start):
    # Hole parked at the zone top under a frozen free particle: the whole
    # block is carpeted, the walker can never sleep, so it random-walks
    # until emitted.  If it visited the entire zone first, the hole resets
    # to the base and the frozen particle thaws into carpet.
    if state.hole[b] != top:
        raise EngineBug("frozen branch without the hole at the zone top")
    visited = np.zeros(state.layout.a + 1, dtype=bool)
    pos = start
    visited[pos - base] = True
    while True:
        instr = state.consume(pos, b)
        if instr == SLEEP:
            continue
        newpos = pos + 1 if instr == JUMP_RIGHT else pos - 1
        if newpos == state.layout.N:
            newpos = 0
        elif newpos < 0:
            newpos = state.layout.N - 1
        hit = _absorption(state, b, newpos)
        if hit is not None:
            receiver, leftward = hit
            if visited.all():
                state.hole[b] = base
                state.frozen[b] = 0
                state.carpet[top] = CARPET_ACTIVE
                state.carpet[base] = CARPET_NONE
                state.thawed[base] += 1
            outcome = _finish_emission(state, b, receiver, newpos, leftward, i_logical)
            return outcome, 1
        pos = newpos
        state.wake(pos)
        if base <= pos <= top:
            visited[pos - base] = True


def _hole_branch_walk(state, i_logical, b, base, top, start):
    # No frozen particle: the hole sits somewhere in [base, top).  The hot
    # particle walks until emitted; sleeping alone in the hole shifts the
    # hole right (freezing on arrival at the top), and an excursion that
    # returns to the hole drags it to the excursion's clamped leftmost site.
    # Positions are tracked unwrapped so the leftmost-site ordering survives
    # a walk across the array origin (block 0's left half).
    N = state.layout.N
    hole_pos = int(state.hole[b])
    pos = start
    at_hole = pos == hole_pos
    on_excursion = False
    exc_min = 0
    steps = 0
    while True:
        instr = state.consume(pos % N, b)
        if instr == SLEEP:
            if pos == hole_pos and state.eta(pos) == 0:
                # the hot particle is alone in the hole and falls asleep
                steps += 1
                state.carpet[hole_pos] = CARPET_SLEEPING
                hole_pos += 1
                state.hole[b] = hole_pos
                if hole_pos == top:
                    if state.carpet[top] != CARPET_ACTIVE:
                        raise EngineBug("zone top not carrying an active carpet particle")
                    state.carpet[top] = CARPET_NONE
                    state.frozen[b] = 1
                    return OUTCOME_FAILURE, steps
                if state.carpet[hole_pos] != CARPET_ACTIVE:
                    raise EngineBug("hole shifted onto a site without an active carpet particle")
                state.carpet[hole_pos] = CARPET_NONE
                pos = hole_pos
                at_hole = True
                on_excursion = False
            continue
        newpos = pos + 1 if instr == JUMP_RIGHT else pos - 1
        if newpos == hole_pos:
            if on_excursion:
                # excursion returned: hot becomes carpet here, the hole moves
                # to the clamped excursion minimum whose carpet becomes hot
                steps += 1
                new_hole = max(min(exc_min, hole_pos), base)
                state.carpet[hole_pos] = CARPET_ACTIVE
                if new_hole != hole_pos and state.carpet[new_hole] != CARPET_ACTIVE:
                    raise EngineBug("excursion minimum without an active carpet particle")
                state.carpet[new_hole] = CARPET_NONE
                state.hole[b] = new_hole
                hole_pos = new_hole
                pos = new_hole
                at_hole = True
                on_excursion = False
                continue
            pos = newpos
            at_hole = True
            continue
        hit = _absorption(state, b, newpos % N)
        if hit is not None:
            receiver, leftward = hit
            outcome = _finish_emission(state, b, receiver, newpos % N, leftward, i_logical)
            return outcome, steps + 1
        if at_hole:
            on_excursion = True
            exc_min = newpos
            at_hole = False
        elif on_excursion and newpos < exc_min:
            exc_min = newpos
        pos = newpos
        state.wake(pos % N)


def check_condition1(free: int, frozen: int, defects: int, n: int) -> bool:
    """free >= 7n/8 + defects and frozen <= 5n/8, in exact arithmetic."""
    return 8 * free >= 7 * n + 8 * defects and 8 * frozen <= 5 * n


def run_mode(state: CarpetState, check_properties: bool = False) -> ModeReport:
    """Attempted emissions until no block is eligible; per-mode flow report.

    With check_properties, every attempted emission is followed by a full
    invariant sweep (raises PropertyViolation listing the violated ids).
    A budget overrun yields a truncated report flagged inconclusive.
    """
    nb = state.layout.n_blocks
    state.flow_L[:] = 0
    state.flow_R[:] = 0
    state.flow_D[:] = 0
    state.flow_M[:] = 0
    state.emitted_flag[:] = False
    j_start = state.jumps
    invariant_start = state.free_total() - state.defect_total()
    emissions = 0
    inconclusive = False
    while True:
        sel = choose_hot(state)
        if sel is None:
            break
        try:
            outcome = attempted_emission(state)
        except BudgetExhausted:
            inconclusive = True
            break
        if outcome in (OUTCOME_LEFT, OUTCOME_RIGHT):
            emissions += 1
        if check_properties:
            violated = assert_properties(state)
            if violated:
                raise PropertyViolation(violated, f"after attempt {state.attempt_index}")
    logical = [state.phys(i) for i in range(nb)]
    free = state.free_total()
    frozen = state.frozen_total()
    defects = state.defect_total()
    emitted = [bool(state.emitted_flag[p]) for p in logical]
    f_en = sum(int(state.frozen[p]) for i, p in enumerate(logical) if emitted[i])
    report = ModeReport(
        mode=state.mode_index,
        emissions=emissions,
        free=free,
        frozen=frozen,
        defects=defects,
        J_delta=state.jumps - j_start,
        condition1=check_condition1(free, frozen, defects, state.layout.n),
        F_En=f_en,
        F_total=frozen,
        L=[int(state.flow_L[p]) for p in logical],
        R=[int(state.flow_R[p]) for p in logical],
        D=[int(state.flow_D[p]) for p in logical],
        M=[int(state.flow_M[p]) for p in logical],
        S=[int(state.frozen[p]) for p in logical],
        emitted_blocks=emitted,
        conserved=(free - defects) == invariant_start,
        inconclusive=inconclusive,
    )
    state.mode_index += 1
    return report


def relabel_blocks(state: CarpetState) -> CarpetState:
    """Rotate logical labels so the old sources become the new sinks."""
    shift = state.layout.n // 2 + 1
    state.offset = (state.offset - shift) % state.layout.n_blocks
    return state


def assert_properties(state: CarpetState) -> list:
    """Evaluate the nine preserved invariants; returns the violated ids."""
    violated = []
    lay = state.layout
    nb = lay.n_blocks

    ok = True
    for b in range(nb):
        if not state.base(b) <= state.hole[b] <= state.top(b):
            ok = False
    if not ok:
        violated.append("P1")

    ok = True
    for x in range(lay.N):
        is_hole = state.hole[state.block_of(x)] == x
        if is_hole or state.is_defect[x]:
            if state.carpet[x] != CARPET_NONE:
                ok = False
        elif state.carpet[x] == CARPET_NONE:
            ok = False
    if not ok:
        violated.append("P2")

    if any(state.defect_count[b] > 0 and state.hole[b] != state.base(b) for b in range(nb)):
        violated.append("P4")

    ok = True
    for b in range(nb):
        for x in range(int(state.hole[b]) + 1, state.top(b)):
            if state.carpet[x] == CARPET_SLEEPING:
                ok = False
    if not ok:
        violated.append("P5")

    # free particles (thawed or frozen) always stand on active sites
    ok = True
    for x in np.nonzero(state.thawed)[0]:
        if state.carpet[x] == CARPET_SLEEPING:
            ok = False
    for b in range(nb):
        if state.frozen[b] and state.carpet[state.top(b)] == CARPET_SLEEPING:
            ok = False
    if not ok:
        violated.append("P6")

    ok = True
    for x in np.nonzero(state.thawed)[0]:
        b = state.block_of(x)
        if x != state.base(b) and x != state.top(b):
            ok = False
    if not ok:
        violated.append("P7")

    if any(state.frozen[b] not in (0, 1) for b in range(nb)):
        violated.append("P8")

    if any(bool(state.frozen[b]) != (state.hole[b] == state.top(b)) for b in range(nb)):
        violated.append("P9")

    if state.hot_active:
        violated.append("P10")

    return violated


def finalize_stabilization(state: CarpetState):
    """Greedy-stabilize the raw configuration left by the mode loop.

    Labels are discarded; the tapes keep advancing from their current
    cursors (corridor sites feed the stabilizer from their L streams).
    Returns (J_total, stable configuration, StabilizeResult).
    """
    config = state.to_configuration()
    remaining = None
    if state.budget is not None:
        remaining = max(state.budget - state.consumed, 0)
        if remaining == 0:
            res = StabilizeResult(config, np.zeros(state.layout.N, dtype=np.int64), 0, 0, True)
            return state.jumps, config, res
    odometer = np.zeros(state.layout.N, dtype=np.int64)
    jumps, consumed, status = kernels.stabilize_ring(
        config.sites,
        state.tapes.cursors,
        state.tapes.greedy_tags(),
        state.tapes.bases,
        np.uint64(state.tapes.t_sleep),
        np.uint64(state.tapes.t_right),
        np.int64(remaining if remaining is not None else 10**18),
        0,
        odometer,
    )
    state.odometer += odometer
    state.consumed += int(consumed)
    state.jumps += int(jumps)
    res = StabilizeResult(config, odometer, int(jumps), int(consumed), status == 1)
    return state.jumps, config, res


_DUMP_CHARS = {
    "carpet_active": "●",   # filled circle
    "carpet_sleeping": "○",  # open circle
    "free": "■",            # filled square
    "frozen": "□",          # open square
    "defect": ".",
    "hole": "_",
}


def dump_state(state: CarpetState) -> str:
    """Two-line ASCII-art dump; second line underlines the hole positions."""
    cells = []
    marks = []
    for x in range(state.layout.N):
        b = state.block_of(x)
        if x % state.layout.K == state.layout.K // 2:
            cells.append("|")
            marks.append(" ")
        if state.frozen_here(x):
            c = _DUMP_CHARS["frozen"]
        elif state.thawed[x] > 0:
            c = _DUMP_CHARS["free"]
        elif state.carpet[x] == CARPET_ACTIVE:
            c = _DUMP_CHARS["carpet_active"]
        elif state.carpet[x] == CARPET_SLEEPING:
            c = _DUMP_CHARS["carpet_sleeping"]
        elif state.is_defect[x]:
            c = _DUMP_CHARS["defect"]
        else:
            c = _DUMP_CHARS["hole"]
        cells.append(c)
        marks.append("_" if state.hole[b] == x else " ")
    return "".join(cells) + "\n" + "".join(marks)

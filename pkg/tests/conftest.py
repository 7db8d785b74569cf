import numpy as np

from ringarw.carpet import CARPET_ACTIVE, CARPET_NONE, CarpetState, build_layout
from ringarw.core import Tapes
from ringarw.rng import derive_seed


def make_state(n=4, a=4, lam=1.0, seed=5, thawed=None, defects=(), holes=None,
               frozen=(), budget=None):
    """Fully carpeted procedure state with explicit frees, defects and holes.

    Defaults: every block's hole vacant at its base, all carpet active, no
    free particles.  Callers are responsible for combinations that respect
    the state invariants (e.g. defects only in blocks whose hole is at the
    base).
    """
    layout = build_layout(n, a)
    N, K = layout.N, layout.K
    dual = (np.arange(N) % K) > a
    tapes = Tapes(derive_seed(seed, "tapes"), lam, N, dual_mask=dual)
    st = CarpetState(layout, tapes, budget=budget)
    st.carpet[:] = CARPET_ACTIVE
    for b in range(layout.n_blocks):
        st.hole[b] = st.base(b)
        st.carpet[st.base(b)] = CARPET_NONE
    for b, pos in (holes or {}).items():
        st.carpet[int(st.hole[b])] = CARPET_ACTIVE
        st.hole[b] = pos
        st.carpet[pos] = CARPET_NONE
    for site, count in (thawed or {}).items():
        st.thawed[site] = count
    for site in defects:
        st.carpet[site] = CARPET_NONE
        st.is_defect[site] = True
        st.defect_count[st.block_of(site)] += 1
    for b in frozen:
        st.carpet[int(st.hole[b])] = CARPET_ACTIVE
        st.hole[b] = st.top(b)
        st.carpet[st.top(b)] = CARPET_NONE
        st.frozen[b] = 1
    return st


def total_particles(state) -> int:
    """Particle count of a procedure state (sleeping carpets count one)."""
    total = 0
    for x in range(state.layout.N):
        e = state.eta(x)
        total += 1 if e == -1 else e
    return total

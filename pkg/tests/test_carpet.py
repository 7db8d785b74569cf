import numpy as np
import pytest

from conftest import make_state, total_particles
from ringarw.carpet import (
    CARPET_ACTIVE,
    CARPET_NONE,
    CARPET_SLEEPING,
    receive_particle,
    assert_properties,
    build_layout,
    check_condition1,
    choose_hot,
    dump_state,
    init_first_mode,
    relabel_blocks,
)
from ringarw.core import ParameterError


class TestLayout:
    def test_block_arithmetic(self):
        lay = build_layout(4, 4)
        assert lay.K == 16 and lay.N == 96
        assert build_layout(2, 2).N == 16

    def test_parity_rejected(self):
        with pytest.raises(ParameterError):
            build_layout(3, 4)
        with pytest.raises(ParameterError):
            build_layout(4, 5)

    def test_block_zero_wraps(self):
        # block 0 covers [-K/2, K/2), i.e. the top of the array plus the bottom
        st = make_state(n=4, a=4)
        assert st.block_of(0) == 0
        assert st.block_of(7) == 0
        assert st.block_of(8) == 1
        assert st.block_of(95) == 0
        assert st.block_of(88) == 0
        assert st.block_of(87) == 5

    def test_small_a_rejected_for_procedure(self):
        with pytest.raises(ParameterError):
            build_layout(2, 2).require_procedure_geometry()

    def test_lcoord_wraps_negative(self):
        st = make_state(n=4, a=4)
        assert st.lcoord(95) == -1
        assert st.lcoord(0) == 0
        assert st.lcoord(20) == 20


class TestInit:
    def test_high_density_limit(self):
        # near density one: no defects, one free per block
        lay = build_layout(4, 4)
        st = init_first_mode(0.999999, lay, 1.0, seed=3)
        assert st.defect_total() == 0
        for b in range(lay.n_blocks):
            assert st.thawed[st.base(b)] == 1
        assert assert_properties(st) == []

    def test_empty_base_is_hole_not_defect(self):
        lay = build_layout(4, 4)
        st = init_first_mode(0.5, lay, 1.0, seed=3)
        empties = [b for b in range(lay.n_blocks) if st.thawed[st.base(b)] == 0]
        assert empties, "expected at least one empty base at density 0.5"
        for b in empties:
            assert st.hole[b] == st.base(b)
            assert not st.is_defect[st.base(b)]

    @pytest.mark.parametrize("seed", range(5))
    def test_invariants_hold_at_init(self, seed):
        st = init_first_mode(0.9, build_layout(4, 4), 0.5, seed=seed)
        assert assert_properties(st) == []

    def test_density_validated(self):
        with pytest.raises(ParameterError):
            init_first_mode(1.0, build_layout(4, 4), 0.5, seed=1)


class TestChooseHot:
    def test_smallest_eligible_block_wins(self):
        st = make_state(thawed={16: 1, 32: 1})  # blocks 1 and 2
        assert choose_hot(st) == (1, 16)

    def test_defective_block_skipped(self):
        st = make_state(thawed={16: 1, 32: 1}, defects=[18])
        assert choose_hot(st) == (2, 32)

    def test_base_preferred_over_top(self):
        st = make_state(thawed={16: 1, 20: 1})
        assert choose_hot(st) == (1, 16)
        st2 = make_state(thawed={20: 1})
        assert choose_hot(st2) == (1, 20)

    def test_sinks_never_chosen(self):
        st = make_state(thawed={0: 2, 80: 2})  # logical blocks 0 and n+1
        assert choose_hot(st) is None

    def test_max_block_restriction(self):
        st = make_state(thawed={48: 1})  # block 3
        assert choose_hot(st) == (3, 48)
        assert choose_hot(st, max_block=2) is None


class TestReceive:
    def test_fix_defect(self):
        st = make_state(defects=[34])
        kind = receive_particle(st, 3, 2, 34, leftward=True)
        assert kind == "fix"
        assert st.defect_count[2] == 0
        assert st.carpet[34] == CARPET_ACTIVE
        assert st.flow_D[2] == 1 and st.flow_M[2] == 0

    def test_park_at_vacant_hole(self):
        st = make_state(defects=[28])  # block 2 defective, hole vacant at 32
        kind = receive_particle(st, 3, 2, 32, leftward=True)
        assert kind == "park_hole"
        assert st.thawed[32] == 1
        assert st.flow_D[2] == 1

    def test_park_at_top_of_clean_block(self):
        st = make_state()
        kind = receive_particle(st, 3, 2, 36, leftward=True)
        assert kind == "park_top"
        assert st.thawed[36] == 1
        assert st.flow_M[2] == 1 and st.flow_D[2] == 0

    def test_rightward_arrivals_not_tallied(self):
        # only the leftward flow feeds the mass-balance tallies
        st = make_state()
        receive_particle(st, 1, 2, 32, leftward=False)
        assert st.thawed[32] == 1
        assert st.flow_M[2] == 0 and st.flow_D[2] == 0


class TestRelabel:
    def test_rotation_maps_sources_to_sinks(self):
        st = make_state(n=4)
        relabel_blocks(st)
        # old block 3 (= n/2 + 1) becomes the new block 0
        assert st.logical(3) == 0
        assert st.phys(0) == 3
        # old sinks become the new sources
        assert st.logical(0) == 3
        assert st.logical(5) == 2

    def test_two_relabelings_are_identity(self):
        st = make_state(n=4)
        relabel_blocks(st)
        relabel_blocks(st)
        assert st.offset == 0

    def test_physical_state_untouched(self):
        st = make_state(n=4, thawed={16: 1}, defects=[34])
        carpet_before = st.carpet.copy()
        hole_before = st.hole.copy()
        relabel_blocks(st)
        assert np.array_equal(st.carpet, carpet_before)
        assert np.array_equal(st.hole, hole_before)
        assert st.defect_count[2] == 1


class TestCondition1:
    def test_boundary_cases(self):
        assert check_condition1(free=15, frozen=10, defects=1, n=16) is True
        assert check_condition1(free=15, frozen=10, defects=2, n=16) is False
        assert check_condition1(free=15, frozen=11, defects=1, n=16) is False

    def test_fractional_threshold_exact(self):
        # 7n/8 = 3.5 at n = 4: three free particles are not enough
        assert check_condition1(free=4, frozen=0, defects=0, n=4) is True
        assert check_condition1(free=3, frozen=0, defects=0, n=4) is False


class TestAssertProperties:
    def test_clean_state_passes(self):
        assert assert_properties(make_state()) == []

    def test_hole_out_of_zone_violates_p1(self):
        st = make_state()
        st.hole[2] = st.base(2) - 1
        assert "P1" in assert_properties(st)

    def test_uncarpeted_site_violates_p2(self):
        st = make_state()
        st.carpet[40] = CARPET_NONE  # not a hole, not registered as defect
        assert "P2" in assert_properties(st)

    def test_defect_with_hole_away_violates_p4(self):
        st = make_state(holes={2: 33}, defects=[38])
        violated = assert_properties(st)
        assert "P4" in violated

    def test_sleeping_carpet_in_zone_violates_p5(self):
        st = make_state(holes={2: 33})
        st.carpet[34] = CARPET_SLEEPING
        assert "P5" in assert_properties(st)

    def test_frozen_without_hole_at_top_violates_p9(self):
        st = make_state(frozen=[2])
        assert assert_properties(st) == []
        st.hole[2] = st.base(2)
        st.carpet[st.base(2)] = CARPET_NONE
        st.carpet[st.top(2)] = CARPET_ACTIVE  # hole bookkeeping reverted
        assert "P9" in assert_properties(st)

    def test_free_away_from_anchor_sites_violates_p7(self):
        st = make_state(thawed={18: 1})
        assert "P7" in assert_properties(st)


class TestStreamTags:
    def test_direction_rule(self):
        from ringarw.rng import TAG_L, TAG_R, TAG_SINGLE

        st = make_state(n=4, a=4)
        # zone sites carry the single stream for any walker
        assert st.stream_tag(16, 1) == TAG_SINGLE
        assert st.stream_tag(20, 2) == TAG_SINGLE
        # corridor between blocks 1 and 2: L from the left, R from the right
        assert st.stream_tag(25, 1) == TAG_L
        assert st.stream_tag(25, 2) == TAG_R
        # deep forays: block 1 reaching into corridor 2, block 3 into corridor 1
        assert st.stream_tag(41, 1) == TAG_L
        assert st.stream_tag(25, 3) == TAG_R
        # ring wrap: block 1 walking left through the corridor behind block 0
        assert st.stream_tag(90, 1) == TAG_R

    def test_confinement_guard(self):
        from ringarw.carpet import EngineBug

        st = make_state(n=8, a=4)
        with pytest.raises(EngineBug):
            st.stream_tag(70, 1)  # corridor 4 is unreachable from block 1


def test_instruction_accounting_through_modes():
    from ringarw.carpet import init_first_mode, run_mode

    st = init_first_mode(0.95, build_layout(4, 4), 1.0, seed=4, budget=10**6)
    run_mode(st)
    assert int(st.odometer.sum()) == st.consumed == st.tapes.consumed_total()
    assert st.jumps <= st.consumed


def test_dump_state_legend():
    st = make_state(thawed={16: 1}, defects=[34], frozen=[3])
    art = dump_state(st)
    lines = art.split("\n")
    assert len(lines) == 2
    assert "■" in lines[0]  # a free particle
    assert "□" in lines[0]  # the frozen particle
    assert "." in lines[0]       # the defect
    assert "_" in lines[1]       # hole markers
    assert "●" in lines[0]  # carpet


def test_total_particle_helper_matches_configuration():
    st = make_state(thawed={16: 2}, defects=[34], frozen=[3])
    assert total_particles(st) == st.to_configuration().particle_count()

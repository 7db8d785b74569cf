"""Truncated-replay flow invariance and its sensitivity to the stream rules."""

import pytest

from ringarw.carpet import CarpetState
from ringarw.replay import verify_flow_invariance
from ringarw.rng import TAG_L, TAG_SINGLE


@pytest.mark.parametrize("seed", range(4))
def test_two_block_ring_always_invariant(seed):
    assert verify_flow_invariance(n=2, a=4, lam=0.5, zeta=0.97, seed=seed) is True


@pytest.mark.parametrize("seed,zeta,lam", [
    (0, 0.97, 0.5), (1, 0.9, 0.5), (2, 0.97, 1.0),
    (3, 0.9, 1.0), (4, 0.95, 2.0), (5, 0.99, 0.25),
])
def test_flow_invariance_parameter_mix(seed, zeta, lam):
    assert verify_flow_invariance(n=6, a=4, lam=lam, zeta=zeta, seed=seed) is True


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_flow_invariance_wider_blocks(seed):
    assert verify_flow_invariance(n=4, a=6, lam=0.5, zeta=0.95, seed=seed) is True


def test_budget_cut_is_inconclusive():
    assert verify_flow_invariance(n=4, a=4, lam=0.5, zeta=0.97, seed=1, budget=500) is None


def test_breaking_stream_discipline_is_detected(monkeypatch):
    # collapse the corridor L/R pair onto one stream: foreign walks then
    # consume instructions the truncated replay also needs, and the replay
    # must stop matching the full run
    original = CarpetState.stream_tag

    def no_direction(self, site, origin_block):
        tag = original(self, site, origin_block)
        return TAG_L if tag != TAG_SINGLE else tag

    monkeypatch.setattr(CarpetState, "stream_tag", no_direction)
    flips = [verify_flow_invariance(n=6, a=4, lam=0.5, zeta=0.9, seed=s) for s in range(6)]
    assert False in flips, f"sabotaged streams never detected: {flips}"

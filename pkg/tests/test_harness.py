import math

import numpy as np
import pytest

from ringarw.carpet import ModeReport, build_layout, init_first_mode
from ringarw.core import ParameterError
from ringarw.harness import (
    Cell,
    ExperimentSpec,
    ReplicaResult,
    TERM_MAX_MODES,
    estimate_mode_success,
    excursion_min_law,
    export_results,
    hole_drift_stats,
    run_replica,
    run_replicas,
    sweep_J_vs_N,
    wilson_interval,
    ytilde_mean,
    ytilde_mean_analytic,
    ytilde_pmf,
    ytilde_sample,
)

SMALL_SPEC = dict(replicas=2, master_seed=9, max_modes=2, budget=10**5)


def small_spec(cells=((4, 4, 0.5, 0.95),), **over):
    kw = dict(SMALL_SPEC)
    kw.update(over)
    return ExperimentSpec(cells=list(cells), **kw)


def test_desk_default_grid_shape():
    spec = ExperimentSpec.desk_default(master_seed=3, replicas=2)
    assert len(spec.cells) == 4 * 3 * 2
    assert {c.a for c in spec.cells} == {4}
    assert {c.n for c in spec.cells} == {4, 8, 12, 16}


class TestRunReplicas:
    def test_deterministic_repeat(self):
        a = run_replicas(small_spec())
        b = run_replicas(small_spec())
        assert [r.as_row() for r in a] == [r.as_row() for r in b]

    def test_parallel_matches_sequential(self):
        spec = small_spec(cells=[(4, 4, 0.5, 0.95), (4, 4, 1.0, 0.9)])
        seq = run_replicas(spec, jobs=1)
        par = run_replicas(spec, jobs=2)
        assert [r.as_row() for r in seq] == [r.as_row() for r in par]

    def test_zero_modes_is_init_plus_finalize(self):
        spec = small_spec(replicas=1, max_modes=0)
        (res,) = run_replicas(spec)
        assert res.mode_reports == []
        assert res.terminated_by in (TERM_MAX_MODES, "budget")
        assert res.J_total >= 0

    def test_initial_defects_match_binomial_oracle(self):
        # defects at init are empty non-base sites: Binomial(N - (n+2), 1 - zeta)
        n, a, zeta = 4, 4, 0.97
        lay = build_layout(n, a)
        m = lay.N - lay.n_blocks
        p_le_n = sum(
            math.comb(m, k) * (1 - zeta) ** k * zeta ** (m - k) for k in range(n + 1)
        )
        reps = 400
        hits = 0
        for seed in range(reps):
            st = init_first_mode(zeta, lay, 0.5, seed=seed)
            hits += st.defect_total() <= n
        se = math.sqrt(p_le_n * (1 - p_le_n) / reps)
        assert abs(hits / reps - p_le_n) < 4 * se


class TestEstimators:
    def _fake_results(self, cond_flags):
        cell = Cell(4, 4, 0.5, 0.97)
        reports = [
            ModeReport(mode=i, emissions=1, free=5, frozen=0, defects=0,
                       J_delta=3, condition1=c, F_En=0, F_total=0,
                       L=[0] * 6, R=[0] * 6, D=[0] * 6, M=[0] * 6, S=[0] * 6,
                       emitted_blocks=[False] * 6, conserved=True)
            for i, c in enumerate(cond_flags)
        ]
        return [ReplicaResult(cell=cell, cell_index=0, replica_index=0, seed=1,
                              mode_reports=reports, J_total=9, terminated_by="no-eligible",
                              free_final=5, frozen_final=0, defects_final=0)]

    def test_all_successful(self):
        out = estimate_mode_success(self._fake_results([True, True, True]))
        (stats,) = out.values()
        assert stats["rate"] == 1.0
        lo, hi = stats["interval"]
        assert lo <= 1.0 <= hi + 1e-12

    def test_no_data(self):
        out = estimate_mode_success(self._fake_results([]))
        (stats,) = out.values()
        assert stats["rate"] is None and stats["interval"] is None

    def test_wilson_width_shrinks(self):
        widths = []
        for total in (25, 100, 400):
            lo, hi = wilson_interval(total // 2, total)
            widths.append(hi - lo)
        assert widths[0] > widths[1] > widths[2]
        assert widths[1] / widths[2] == pytest.approx(2.0, rel=0.1)

    def test_sweep_single_cell_single_row(self):
        results = run_replicas(small_spec(replicas=2))
        rows = sweep_J_vs_N(results)
        assert len(rows) == 1
        assert rows[0]["N"] == 96 and rows[0]["replicas"] == 2
        assert rows[0]["mean_J"] >= rows[0]["mean_modes"]

    def test_sweep_rejects_mixed_grid(self):
        results = run_replicas(small_spec(cells=[(4, 4, 0.5, 0.95), (4, 4, 1.0, 0.95)]))
        with pytest.raises(ParameterError):
            sweep_J_vs_N(results)


class TestYtilde:
    def test_normalization_and_mean_agreement(self):
        for K in (16, 36):
            a = int(math.isqrt(K))
            for lam in (0.25, 1.0, 4.0):
                for v in range(1, a + 1):
                    dist = ytilde_pmf(v, lam, K)
                    assert (dist.pmf >= 0).all()
                    assert abs(dist.pmf.sum() - 1.0) < 1e-12
                    assert abs(ytilde_mean(dist) - ytilde_mean_analytic(v, lam, K)) < 1e-12

    def test_spot_value(self):
        # brute-force oracle over the four-point support at v=2, lam=1, K=16:
        # P = (1/2, 9/32, 1/8, 3/32) on (+1, 0, -1, -2), mean 3/16
        dist = ytilde_pmf(2, 1.0, 16)
        assert dist.pmf == pytest.approx([0.5, 9 / 32, 1 / 8, 3 / 32], abs=1e-15)
        oracle = 1 * 0.5 + 0 * 9 / 32 + (-1) * 1 / 8 + (-2) * 3 / 32
        assert oracle == 3 / 16
        assert ytilde_mean(dist) == pytest.approx(3 / 16, abs=1e-15)

    def test_mean_nonincreasing_in_v(self):
        means = [ytilde_mean(ytilde_pmf(v, 1.0, 36)) for v in range(1, 7)]
        assert all(m1 >= m2 - 1e-15 for m1, m2 in zip(means, means[1:]))

    def test_monte_carlo_mean_within_3_sigma(self):
        dist = ytilde_pmf(4, 0.5, 16)
        n = 100000
        draws = ytilde_sample(dist, n, seed=77)
        mu = ytilde_mean(dist)
        var = float(np.dot((dist.support - mu) ** 2, dist.pmf))
        assert abs(draws.mean() - mu) < 3 * math.sqrt(var / n)

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            ytilde_pmf(0, 1.0, 16)
        with pytest.raises(ParameterError):
            ytilde_pmf(10, 1.0, 16)  # deepest mass would go negative
        with pytest.raises(ParameterError):
            ytilde_pmf(2, 0.0, 16)


class TestExcursionLaw:
    def test_theory_telescopes(self):
        assert sum(1 / (k * (k + 1)) for k in range(1, 22)) == pytest.approx(1 - 1 / 22)

    def test_empirical_matches_gamblers_ruin(self):
        n = 100000
        law = excursion_min_law(n, seed=5)
        for k in range(1, 6):
            p = 1 / (k * (k + 1))
            se = math.sqrt(p * (1 - p) / n)
            assert abs(law.frequency(k) - p) < 3 * se

    def test_counts_partition_samples(self):
        law = excursion_min_law(5000, seed=2, max_depth=10)
        assert law.counts.sum() + law.tail == 5000


class TestHoleDrift:
    def test_static_trace(self):
        traces = [{"block": 1, "pblock": 1, "j": j, "H": 0, "T": 1, "outcome": "emitted_left"}
                  for j in range(1, 6)]
        out = hole_drift_stats(traces, a=4)
        assert out["mean_delta_H"] == 0.0
        assert out["exceed_low_or_top"] == 0.0
        assert out["attempts"] == 5

    def test_real_traces_have_valid_fields(self):
        cell = Cell(4, 4, 2.0, 0.95)
        res = run_replica(cell, seed=3, max_modes=2, budget=10**6, trace_holes=True)
        if res.hole_trace:
            out = hole_drift_stats(res.hole_trace, a=4)
            assert out["attempts"] == len(res.hole_trace)
            assert min(r["T"] for r in res.hole_trace) >= 1
            assert out["failures_at_top"] == out["failures"]

    def test_empty_input(self):
        assert hole_drift_stats([], a=4) == {"attempts": 0}


class TestExport:
    def test_headers_only_for_empty_results(self, tmp_path):
        paths = export_results([], str(tmp_path))
        with open(paths["replicas"]) as fh:
            lines = fh.read().splitlines()
        assert len(lines) == 1
        assert lines[0].startswith("n,a,K,N,lambda,zeta,seed,modes,J_total")

    def test_reexport_is_byte_identical(self, tmp_path):
        results = run_replicas(small_spec())
        p1 = export_results(results, str(tmp_path / "one"))
        p2 = export_results(results, str(tmp_path / "two"))
        for key in ("replicas", "modes"):
            assert open(p1[key], "rb").read() == open(p2[key], "rb").read()

    def test_row_counts(self, tmp_path):
        results = run_replicas(small_spec(replicas=3))
        paths = export_results(results, str(tmp_path))
        n_rows = len(open(paths["replicas"]).read().splitlines()) - 1
        assert n_rows == 3
        mode_rows = len(open(paths["modes"]).read().splitlines()) - 1
        assert mode_rows == sum(len(r.mode_reports) for r in results)

    def test_trace_jsonl_schema(self, tmp_path):
        import json

        spec = small_spec(trace_holes=True)
        results = run_replicas(spec)
        paths = export_results(results, str(tmp_path), traces=True)
        lines = open(paths["traces"]).read().splitlines()
        if lines:
            rec = json.loads(lines[0])
            assert set(rec) == {"block", "pblock", "j", "H", "T", "outcome"}

"""Monte Carlo harness: parameter sweeps, estimators, reference laws.

Replicas are independent runs of init -> mode loop -> residual
stabilization; each derives its seed from (master seed, cell index,
replica index), so output is a pure function of the experiment spec no
matter how replicas are scheduled.  Probability statements are reported
as estimates with confidence intervals, never asserted against any
theoretical constant: the regime where those constants bite is far beyond
desk scale, as the growth measurements themselves show.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .carpet import (
    BudgetExhausted,
    build_layout,
    choose_hot,
    finalize_stabilization,
    init_first_mode,
    relabel_blocks,
    run_mode,
)
from .core import ParameterError
from .rng import derive_seed, mix64

DEFAULT_REPLICA_BUDGET = 10**7
DEFAULT_MAX_MODES = 64

TERM_CONDITION1 = "condition1-fail"
TERM_NO_ELIGIBLE = "no-eligible"
TERM_BUDGET = "budget"
TERM_MAX_MODES = "max-modes"

REPLICA_FIELDS = [
    "n", "a", "K", "N", "lambda", "zeta", "seed", "modes", "J_total",
    "terminated_by", "free_final", "frozen_final", "defects_final",
]
MODE_FIELDS = [
    "n", "a", "lambda", "zeta", "seed", "mode", "J_delta", "emissions",
    "condition1", "free", "frozen", "defects", "F_En", "F_total",
]


@dataclass(frozen=True)
class Cell:
    n: int
    a: int
    lam: float
    zeta: float


@dataclass
class ExperimentSpec:
    cells: list
    replicas: int = 20
    master_seed: int = 1
    max_modes: int = DEFAULT_MAX_MODES
    budget: int = DEFAULT_REPLICA_BUDGET
    out_dir: str = "results"
    trace_holes: bool = False

    def __post_init__(self):
        if self.replicas < 1:
            raise ParameterError("replicas must be >= 1")
        self.cells = [c if isinstance(c, Cell) else Cell(*c) for c in self.cells]
        for c in self.cells:
            build_layout(c.n, c.a).require_procedure_geometry()

    @classmethod
    def grid(cls, ns, a_values, lams, zetas, **kw):
        cells = [Cell(n, a, lam, z) for n in ns for a in a_values for lam in lams for z in zetas]
        return cls(cells=cells, **kw)

    @classmethod
    def desk_default(cls, master_seed: int = 1, **kw):
        """Desk-scale grid: a=4, n in {4,8,12,16}, lambda in {0.25,0.5,1.0}, zeta in {0.9,0.97}.

        Runs in minutes under the default per-replica budget; replicas in the
        slow-phase cells end budget-capped and are recorded as such.
        """
        return cls.grid(ns=[4, 8, 12, 16], a_values=[4], lams=[0.25, 0.5, 1.0],
                        zetas=[0.9, 0.97], master_seed=master_seed, **kw)


@dataclass
class ReplicaResult:
    cell: Cell
    cell_index: int
    replica_index: int
    seed: int
    mode_reports: list
    J_total: int
    terminated_by: str
    free_final: int
    frozen_final: int
    defects_final: int
    J_residual: int = 0
    hole_trace: list = field(default_factory=list)

    def as_row(self) -> dict:
        lay = build_layout(self.cell.n, self.cell.a)
        return {
            "n": self.cell.n,
            "a": self.cell.a,
            "K": lay.K,
            "N": lay.N,
            "lambda": self.cell.lam,
            "zeta": self.cell.zeta,
            "seed": self.seed,
            "modes": len(self.mode_reports),
            "J_total": self.J_total,
            "terminated_by": self.terminated_by,
            "free_final": self.free_final,
            "frozen_final": self.frozen_final,
            "defects_final": self.defects_final,
        }


def run_replica(cell: Cell, seed: int, max_modes=DEFAULT_MAX_MODES,
                budget=DEFAULT_REPLICA_BUDGET, trace_holes=False,
                cell_index=0, replica_index=0) -> ReplicaResult:
    """One full replica: init, mode loop, residual stabilization."""
    layout = build_layout(cell.n, cell.a)
    state = init_first_mode(cell.zeta, layout, cell.lam, seed, budget=budget)
    if trace_holes:
        state.hole_trace = []
    reports = []
    terminated = None
    while True:
        if len(reports) >= max_modes:
            terminated = TERM_MAX_MODES
            break
        if choose_hot(state) is None:
            terminated = TERM_NO_ELIGIBLE
            break
        try:
            report = run_mode(state)
        except BudgetExhausted:
            terminated = TERM_BUDGET
            break
        reports.append(report)
        if report.inconclusive:
            terminated = TERM_BUDGET
            break
        if not report.condition1:
            terminated = TERM_CONDITION1
            break
        relabel_blocks(state)
    j_total, _config, res = finalize_stabilization(state)
    if res.exhausted:
        terminated = TERM_BUDGET
    return ReplicaResult(
        cell=cell,
        cell_index=cell_index,
        replica_index=replica_index,
        seed=seed,
        mode_reports=reports,
        J_total=j_total,
        terminated_by=terminated,
        free_final=state.free_total(),
        frozen_final=state.frozen_total(),
        defects_final=state.defect_total(),
        J_residual=res.jumps,
        hole_trace=state.hole_trace or [],
    )


def _run_one(args):
    cell, ci, ri, seed, max_modes, budget, trace = args
    return run_replica(cell, seed, max_modes, budget, trace, ci, ri)


def run_replicas(spec: ExperimentSpec, jobs: int = 1) -> list:
    """All replicas of the grid, merged in (cell, replica) order.

    Per-replica seeds derive from (master seed, cell index, replica index),
    so any scheduling yields the same merged output.
    """
    tasks = []
    for ci, cell in enumerate(spec.cells):
        for ri in range(spec.replicas):
            seed = derive_seed(spec.master_seed, "replica", ci, ri)
            tasks.append((cell, ci, ri, seed, spec.max_modes, spec.budget, spec.trace_holes))
    if jobs <= 1:
        results = [_run_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    results.sort(key=lambda r: (r.cell_index, r.replica_index))
    return results


# -- estimators -------------------------------------------------------------


def wilson_interval(successes: int, total: int, z: float = 1.96):
    """95% Wilson score interval for a binomial proportion."""
    if total == 0:
        return None
    p = successes / total
    denom = 1 + z * z / total
    center = (p + z * z / (2 * total)) / denom
    half = z * math.sqrt(p * (1 - p) / total + z * z / (4 * total * total)) / denom
    return max(center - half, 0.0), min(center + half, 1.0)


def estimate_mode_success(results):
    """Per-cell fraction of modes meeting the success condition, with CI."""
    out = {}
    by_cell = {}
    for r in results:
        by_cell.setdefault(r.cell, []).append(r)
    for cell, rs in by_cell.items():
        total = sum(len(r.mode_reports) for r in rs)
        succ = sum(rep.condition1 for r in rs for rep in r.mode_reports)
        if total == 0:
            out[cell] = {"successes": 0, "total": 0, "rate": None, "interval": None}
        else:
            out[cell] = {
                "successes": succ,
                "total": total,
                "rate": succ / total,
                "interval": wilson_interval(succ, total),
            }
    return out


def sweep_J_vs_N(results):
    """Per-N jump summary for a grid that varies n at fixed (a, lambda, zeta)."""
    rest = {(r.cell.a, r.cell.lam, r.cell.zeta) for r in results}
    if len(rest) != 1:
        raise ParameterError(f"sweep requires fixed (a, lambda, zeta), got {sorted(rest)}")
    by_n = {}
    for r in results:
        by_n.setdefault(r.cell.n, []).append(r)
    rows = []
    for n in sorted(by_n):
        rs = by_n[n]
        js = np.array([r.J_total for r in rs], dtype=float)
        modes = np.array([len(r.mode_reports) for r in rs], dtype=float)
        rows.append({
            "N": build_layout(n, rs[0].cell.a).N,
            "n": n,
            "mean_J": float(js.mean()),
            "stderr_J": float(js.std(ddof=1) / math.sqrt(len(js))) if len(js) > 1 else 0.0,
            "mean_modes": float(modes.mean()),
            "replicas": len(rs),
        })
    return rows


# -- reference distribution for the hole displacement ------------------------


@dataclass
class YtildeDist:
    """Reference step-displacement law on {+1, 0, -1, ..., -v}."""

    v: int
    lam: float
    K: int
    delta: float
    support: np.ndarray
    pmf: np.ndarray


def ytilde_pmf(v: int, lam: float, K: int) -> YtildeDist:
    """Exact displacement pmf; requires K >= 2v so no mass is negative."""
    if v < 1:
        raise ParameterError(f"v must be >= 1, got {v}")
    if lam <= 0:
        raise ParameterError(f"sleep rate must be positive, got {lam}")
    if K < 2 * v:
        raise ParameterError(f"K must be >= 2v to keep the deepest mass non-negative, got K={K} v={v}")
    delta = 1.0 / (K * (1.0 + lam))
    q = 0.5 / (1.0 + lam)
    support = np.array([1, 0] + [-k for k in range(1, v + 1)], dtype=np.int64)
    pmf = np.empty(v + 2, dtype=np.float64)
    pmf[0] = lam / (1.0 + lam)
    pmf[1] = q + delta
    for k in range(1, v):
        pmf[1 + k] = q / (k * (k + 1))
    pmf[v + 1] = q - delta - sum(q / (k * (k + 1)) for k in range(1, v))
    return YtildeDist(v=v, lam=lam, K=K, delta=delta, support=support, pmf=pmf)


def ytilde_mean(dist: YtildeDist) -> float:
    """Mean as the support sum over the pmf."""
    return float(np.dot(dist.support, dist.pmf))


def ytilde_mean_analytic(v: int, lam: float, K: int) -> float:
    """Mean in closed form: 2q*lam - q*H_v + v*delta with q = 1/(2(1+lam))."""
    q = 0.5 / (1.0 + lam)
    h_v = sum(1.0 / j for j in range(1, v + 1))
    return 2 * q * lam - q * h_v + v / (K * (1.0 + lam))


def ytilde_sample(dist: YtildeDist, n_samples: int, seed: int) -> np.ndarray:
    """Deterministic i.i.d. draws from the pmf (inverse transform)."""
    cdf = np.cumsum(dist.pmf)
    cdf[-1] = 1.0
    rng = np.random.default_rng(seed)
    u = rng.random(n_samples)
    return dist.support[np.searchsorted(cdf, u, side="right")]


# -- excursion-minimum law ----------------------------------------------------


@dataclass
class ExcursionLaw:
    samples: int
    max_depth: int
    counts: np.ndarray  # counts[k-1] = excursions with minimum exactly -k
    tail: int           # deeper than max_depth

    def frequency(self, k: int) -> float:
        return self.counts[k - 1] / self.samples

    @staticmethod
    def theory(k: int) -> float:
        return 1.0 / (k * (k + 1))


def excursion_min_law(samples: int, seed: int, max_depth: int = 20) -> ExcursionLaw:
    """Empirical law of the minimum of left-first random-walk excursions."""
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    depths = kernels.excursion_minima(np.uint64(mix64(seed)), int(samples), int(max_depth))
    counts = np.bincount(depths, minlength=max_depth + 2)
    return ExcursionLaw(
        samples=samples,
        max_depth=max_depth,
        counts=counts[1:max_depth + 1].copy(),
        tail=int(counts[max_depth + 1]),
    )


# -- hole drift ----------------------------------------------------------------


def hole_drift_stats(traces, a: int):
    """Empirical drift/exceedance/step statistics from hole-trace records.

    traces: iterable of per-attempt dicts with keys block, j, H, T, outcome.
    Records are grouped by block; the position before an attempt is the
    block's previous record (initial holes sit at position 0).
    """
    records = sorted(traces, key=lambda t: t["j"])
    if not records:
        return {"attempts": 0}
    half = a // 2
    prev_by_block = {}
    deltas = []
    exceed = {"low_or_top": [0, 0], "middle": [0, 0]}  # [exceedances, total]
    t_hist = {}
    failures_at_top = 0
    failures = 0
    for rec in records:
        key = rec.get("pblock", rec["block"])
        h_prev = prev_by_block.get(key, 0)
        h_now = rec["H"]
        deltas.append(h_now - h_prev)
        cls = "middle" if half < h_prev < a else "low_or_top"
        exceed[cls][1] += 1
        if h_now > half:
            exceed[cls][0] += 1
        t_hist[rec["T"]] = t_hist.get(rec["T"], 0) + 1
        if rec["outcome"] == "failure":
            failures += 1
            failures_at_top += int(h_now == a)
        prev_by_block[key] = h_now
    out = {
        "attempts": len(records),
        "mean_delta_H": float(np.mean(deltas)),
        "T_histogram": dict(sorted(t_hist.items())),
        "failures": failures,
        "failures_at_top": failures_at_top,
    }
    for cls, (num, den) in exceed.items():
        out[f"exceed_{cls}"] = (num / den) if den else None
    return out


# -- export -------------------------------------------------------------------


def export_results(results, out_dir: str, traces: bool = False):
    """Write replica and per-mode CSVs (and hole-trace JSONL when asked).

    Re-exporting identical results produces byte-identical files.
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "replicas": os.path.join(out_dir, "replicas.csv"),
        "modes": os.path.join(out_dir, "modes.csv"),
    }
    with open(paths["replicas"], "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=REPLICA_FIELDS)
        w.writeheader()
        for r in results:
            w.writerow(r.as_row())
    with open(paths["modes"], "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=MODE_FIELDS)
        w.writeheader()
        for r in results:
            for rep in r.mode_reports:
                w.writerow({
                    "n": r.cell.n,
                    "a": r.cell.a,
                    "lambda": r.cell.lam,
                    "zeta": r.cell.zeta,
                    "seed": r.seed,
                    "mode": rep.mode,
                    "J_delta": rep.J_delta,
                    "emissions": rep.emissions,
                    "condition1": int(rep.condition1),
                    "free": rep.free,
                    "frozen": rep.frozen,
                    "defects": rep.defects,
                    "F_En": rep.F_En,
                    "F_total": rep.F_total,
                })
    if traces:
        paths["traces"] = os.path.join(out_dir, "holes.jsonl")
        with open(paths["traces"], "w") as fh:
            for r in results:
                for rec in r.hole_trace:
                    fh.write(json.dumps({
                        "block": rec["block"], "pblock": rec["pblock"],
                        "j": rec["j"], "H": rec["H"],
                        "T": rec["T"], "outcome": rec["outcome"],
                    }) + "\n")
    return paths

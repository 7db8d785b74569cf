"""Activated random walks on the ring Z_N.

Bare-model stabilization (core), the structured carpet toppling procedure
with flow accounting (carpet), a coupled-replay check of flow invariance
(replay), and a Monte Carlo sweep harness (harness).
"""

from .kernels import BACKEND
from .core import (
    Configuration,
    DEFAULT_BUDGET,
    IllegalToppling,
    JumpCounter,
    ParameterError,
    ScriptedTapes,
    StabilizeResult,
    Tapes,
    TapeTagError,
    apply_instruction,
    check_abelian,
    is_stable,
    is_stable_config,
    preprocess_multi,
    sample_instruction,
    stabilize_greedy,
    topple,
)
from .carpet import (
    BlockLayout,
    BudgetExhausted,
    CarpetState,
    EngineBug,
    ModeReport,
    PropertyViolation,
    assert_properties,
    attempted_emission,
    build_layout,
    check_condition1,
    choose_hot,
    dump_state,
    finalize_stabilization,
    init_first_mode,
    relabel_blocks,
    run_mode,
)
from .replay import FlowRecorder, ReplayDivergence, replay_restricted, verify_flow_invariance
from .harness import (
    Cell,
    ExcursionLaw,
    ExperimentSpec,
    ReplicaResult,
    YtildeDist,
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

__all__ = [
    "BACKEND",
    "BlockLayout",
    "BudgetExhausted",
    "CarpetState",
    "Cell",
    "Configuration",
    "DEFAULT_BUDGET",
    "EngineBug",
    "ExcursionLaw",
    "ExperimentSpec",
    "FlowRecorder",
    "IllegalToppling",
    "JumpCounter",
    "ModeReport",
    "ParameterError",
    "PropertyViolation",
    "ReplayDivergence",
    "ReplicaResult",
    "ScriptedTapes",
    "StabilizeResult",
    "Tapes",
    "TapeTagError",
    "YtildeDist",
    "apply_instruction",
    "assert_properties",
    "attempted_emission",
    "build_layout",
    "check_abelian",
    "check_condition1",
    "choose_hot",
    "dump_state",
    "estimate_mode_success",
    "excursion_min_law",
    "export_results",
    "finalize_stabilization",
    "hole_drift_stats",
    "init_first_mode",
    "is_stable",
    "is_stable_config",
    "preprocess_multi",
    "relabel_blocks",
    "replay_restricted",
    "run_mode",
    "run_replica",
    "run_replicas",
    "sample_instruction",
    "stabilize_greedy",
    "sweep_J_vs_N",
    "topple",
    "verify_flow_invariance",
    "wilson_interval",
    "ytilde_mean",
    "ytilde_mean_analytic",
    "ytilde_pmf",
    "ytilde_sample",
]

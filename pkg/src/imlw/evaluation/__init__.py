"""Rollout trials, the Voting-Positive-Rate protocol, sweeps, scaling runs."""

from .evaluators import EvaluatorSpec, default_evaluators, vote
from .report import RunSummary, comparison_table, render_json, render_text
from .scaling import ScalingPoint, scaling_experiment
from .sweep import sweep
from .trials import TrialResult, judge, rollout, trial_seed
from .vpr import (
    DEFAULT_REPEATS,
    VPRReport,
    aggregate_report,
    vpr,
    vpr_unanimity_bound_check,
)

__all__ = [
    "EvaluatorSpec", "default_evaluators", "vote",
    "RunSummary", "comparison_table", "render_json", "render_text",
    "ScalingPoint", "scaling_experiment", "sweep",
    "TrialResult", "judge", "rollout", "trial_seed",
    "DEFAULT_REPEATS", "VPRReport", "aggregate_report", "vpr",
    "vpr_unanimity_bound_check",
]

"""The Voting-Positive-Rate protocol: unanimous votes over cases x repeats."""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..diffusion.policy import PolicyBundle, Predictor
from ..sim.types import TaskSpec
from .evaluators import EvaluatorSpec, default_evaluators
from .trials import TrialResult, judge, rollout, trial_seed

DEFAULT_REPEATS = 5


@dataclass(frozen=True)
class VPRReport:
    task_name: str
    evaluator_ids: tuple[str, ...]
    trials: tuple[TrialResult, ...]
    vpr: float
    per_case: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "schema_version": "iml-vpr-v1",
            "task": self.task_name,
            "evaluators": list(self.evaluator_ids),
            "vpr": self.vpr,
            "per_case": self.per_case,
            "trials": [
                {"case_id": t.case_id, "repeat": t.repeat_index, "seed": t.seed,
                 "termination": t.termination, "ticks": t.ticks,
                 "oracle_success": t.oracle_success, "votes": list(t.votes or ())}
                for t in self.trials
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def aggregate_report(task_name: str, evaluators: tuple[EvaluatorSpec, ...],
                     trials: list[TrialResult]) -> VPRReport:
    unanimous = sum(1 for t in trials if t.unanimous)
    per_case: dict[str, list[TrialResult]] = {}
    for t in trials:
        per_case.setdefault(t.case_id, []).append(t)
    return VPRReport(
        task_name=task_name,
        evaluator_ids=tuple(e.evaluator_id for e in evaluators),
        trials=tuple(trials),
        vpr=unanimous / len(trials),
        per_case={cid: sum(1 for t in ts if t.unanimous) / len(ts)
                  for cid, ts in per_case.items()},
    )


def vpr(task: TaskSpec, bundle: PolicyBundle,
        evaluators: tuple[EvaluatorSpec, ...] | None = None,
        repeats: int = DEFAULT_REPEATS, seed_block: int = 0,
        predictor: Predictor | None = None) -> VPRReport:
    """cases x repeats trials with distinct deterministic seeds, unanimity-aggregated."""
    if evaluators is None:
        evaluators = default_evaluators()
    trials = []
    for case in task.cases:
        for repeat in range(repeats):
            seed = trial_seed(seed_block, task.name, case.case_id, repeat)
            trial = rollout(bundle, task, case, seed, repeat_index=repeat,
                            predictor=predictor)
            trials.append(judge(trial, evaluators))
    return aggregate_report(task.name, evaluators, trials)


def vpr_unanimity_bound_check(report: VPRReport) -> bool:
    """vpr <= min over evaluators of that evaluator's individual positive rate."""
    n = len(report.trials)
    for i in range(len(report.evaluator_ids)):
        rate_i = sum(1 for t in report.trials if t.votes and t.votes[i]) / n
        if report.vpr > rate_i + 1e-12:
            return False
    return True

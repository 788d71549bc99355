"""Single-trial rollout execution and judging."""

from __future__ import annotations

import zlib
from dataclasses import dataclass, replace

import numpy as np

from ..diffusion.policy import PolicyBundle, Predictor
from ..diffusion.rollout import receding_horizon_rollout
from ..sim.types import CaseSetup, TaskSpec
from ..sim.world import world_init
from .evaluators import EvaluatorSpec, vote


@dataclass(frozen=True)
class TrialResult:
    task_name: str
    case_id: str
    repeat_index: int
    seed: int
    termination: str
    ticks: int
    oracle_success: bool
    votes: tuple[bool, ...] | None = None

    @property
    def unanimous(self) -> bool:
        return self.votes is not None and all(self.votes)


def trial_seed(seed_block: int, task_name: str, case_id: str, repeat: int) -> int:
    return int(np.random.SeedSequence(
        entropy=seed_block,
        spawn_key=(zlib.crc32(task_name.encode()), zlib.crc32(case_id.encode()), repeat),
    ).generate_state(1)[0])


def rollout(bundle: PolicyBundle, task: TaskSpec, case: CaseSetup, seed: int,
            repeat_index: int = 0, predictor: Predictor | None = None) -> TrialResult:
    """One evaluation rollout; divergence is a failed trial, not a crash."""
    world = world_init(task, case, seed)
    rng = np.random.default_rng((seed, 0x51))
    result = receding_horizon_rollout(bundle, world, task, rng, predictor=predictor)
    return TrialResult(
        task_name=task.name,
        case_id=case.case_id,
        repeat_index=repeat_index,
        seed=seed,
        termination=result.termination,
        ticks=result.world.tick_index,
        oracle_success=result.success,
    )


def judge(trial: TrialResult, evaluators: tuple[EvaluatorSpec, ...]) -> TrialResult:
    """Attach one independent vote per evaluator, deterministically keyed to the trial."""
    votes = tuple(
        vote(e, trial.oracle_success, trial.task_name, trial.case_id, trial.repeat_index)
        for e in evaluators
    )
    return replace(trial, votes=votes)

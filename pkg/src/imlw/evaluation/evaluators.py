"""Evaluator specifications and the deterministic keyed voting rule."""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EvaluatorSpec:
    evaluator_id: str
    flip_noise: float = 0.0  # probability of inverting the geometric verdict
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.flip_noise < 0.5:
            raise ValueError("flip_noise must be in [0, 0.5)")


def default_evaluators(count: int = 4) -> tuple[EvaluatorSpec, ...]:
    return tuple(EvaluatorSpec(evaluator_id=f"eval{i}") for i in range(count))


def _vote_key(evaluator: EvaluatorSpec, task_name: str, case_id: str, repeat: int) -> tuple:
    return (evaluator.seed,
            zlib.crc32(evaluator.evaluator_id.encode()),
            zlib.crc32(task_name.encode()),
            zlib.crc32(case_id.encode()),
            repeat)


def vote(evaluator: EvaluatorSpec, oracle_success: bool, task_name: str,
         case_id: str, repeat: int) -> bool:
    """Oracle verdict, flipped with a Bernoulli draw keyed by (evaluator, trial)."""
    if evaluator.flip_noise == 0.0:
        return oracle_success
    rng = np.random.default_rng(_vote_key(evaluator, task_name, case_id, repeat))
    flip = rng.random() < evaluator.flip_noise
    return oracle_success != flip

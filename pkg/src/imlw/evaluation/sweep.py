"""Checkpoint sweep: evaluate every saved checkpoint on paired trial seeds."""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..diffusion.policy import Predictor
from ..sim.types import TaskSpec
from .evaluators import EvaluatorSpec
from .vpr import DEFAULT_REPEATS, VPRReport, vpr

if TYPE_CHECKING:
    from ..train.registry import CheckpointRecord, CheckpointRegistry


def sweep(registry: "CheckpointRegistry", task: TaskSpec,
          evaluators: tuple[EvaluatorSpec, ...] | None = None,
          repeats: int = DEFAULT_REPEATS, seed_block: int = 0,
          predictors: dict[int, Predictor] | None = None,
          ) -> tuple["CheckpointRecord", list[dict]]:
    """Best checkpoint by VPR; ties go to the earliest epoch. Seeds are shared
    across checkpoints so every candidate faces identical trials."""
    if not registry.records:
        raise ValueError("registry has no checkpoints")
    table = []
    best = None
    best_vpr = -1.0
    for record in registry.records:
        predictor = predictors.get(record.epoch) if predictors else None
        report: VPRReport = vpr(task, record.bundle, evaluators, repeats=repeats,
                                seed_block=seed_block, predictor=predictor)
        table.append({"checkpoint_id": record.checkpoint_id, "epoch": record.epoch,
                      "vpr": report.vpr})
        if report.vpr > best_vpr:
            best, best_vpr = record, report.vpr
    return best, table

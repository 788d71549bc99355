"""Dataset-scaling experiment: collect -> train -> sweep across demo counts."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ..expert.collect import collect
from ..expert.profiles import BUILTIN_PROFILES, ProficiencyProfile
from ..net import EncoderConfig, NoiseNetConfig
from ..sim.types import TaskSpec
from .evaluators import EvaluatorSpec
from .sweep import sweep
from .vpr import DEFAULT_REPEATS

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScalingPoint:
    demo_count: int
    per_seed_vpr: tuple[float, ...]

    @property
    def mean_vpr(self) -> float:
        return float(np.mean(self.per_seed_vpr))

    @property
    def median_vpr(self) -> float:
        return float(np.median(self.per_seed_vpr))

    @property
    def vpr_range(self) -> tuple[float, float]:
        return (min(self.per_seed_vpr), max(self.per_seed_vpr))


def scaling_experiment(task: TaskSpec, demo_counts: list[int], train_config,
                       encoder_config: EncoderConfig, noisenet_config: NoiseNetConfig,
                       seeds: list[int], workdir: str | Path,
                       profile: ProficiencyProfile | None = None,
                       evaluators: tuple[EvaluatorSpec, ...] | None = None,
                       repeats: int = DEFAULT_REPEATS) -> list[ScalingPoint]:
    """Best-of-sweep VPR per demo count, repeated over seeds."""
    from ..train.loop import train  # local import to avoid a module cycle

    if list(demo_counts) != sorted(demo_counts):
        raise ValueError("demo_counts must be ascending")
    profile = profile or BUILTIN_PROFILES["expertA"]
    workdir = Path(workdir)
    points = []
    for count in demo_counts:
        per_case, rem = divmod(count, len(task.cases))
        if per_case < 1 or rem != 0:
            raise ValueError(
                f"demo count {count} is not a multiple of the {len(task.cases)} cases")
        vprs = []
        for seed in seeds:
            data_dir = workdir / f"{task.name}-n{count}-seed{seed}"
            manifest = collect(task, list(task.cases), per_case, profile, seed, data_dir)
            registry = train(manifest, encoder_config, noisenet_config,
                             replace(train_config, seed=seed))
            _, table = sweep(registry, task, evaluators, repeats=repeats, seed_block=seed)
            best_vpr = max(row["vpr"] for row in table)
            log.info("scaling %s n=%d seed=%d best vpr=%.3f", task.name, count, seed, best_vpr)
            vprs.append(best_vpr)
        points.append(ScalingPoint(demo_count=count, per_seed_vpr=tuple(vprs)))
    return points

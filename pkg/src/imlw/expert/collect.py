"""Batch demonstration collection with success filtering."""

from __future__ import annotations

import logging
import zlib
from pathlib import Path

import numpy as np

from ..data.episode import ActionRecord, Episode, StepRecord
from ..data.manifest import DatasetManifest, DatasetWriter
from ..errors import DataError
from ..obs import DEFAULT_CAMERAS, build_observation
from ..sim.types import DT, CameraConfig, CaseSetup, Pose2, TaskSpec, WorldState
from ..sim.world import step, success, world_init
from .controller import PlanExecutor
from .planner import plan
from .profiles import ProficiencyProfile

log = logging.getLogger(__name__)

MAX_RESAMPLES = 5
MIN_CASE_SUCCESS_RATE = 0.2


def run_demonstration(task: TaskSpec, case: CaseSetup, profile: ProficiencyProfile,
                      seed: int, cameras: tuple[CameraConfig, ...] = DEFAULT_CAMERAS,
                      ) -> tuple[list[StepRecord], WorldState, bool]:
    """Roll the scripted expert once; returns (steps, final world, success flag)."""
    world = world_init(task, case, seed)
    rng = np.random.default_rng((seed, 0xE0))
    executor = PlanExecutor(plan(task, world), profile)
    steps: list[StepRecord] = []
    max_ticks = int(round(task.max_rollout_time / DT))
    for _ in range(max_ticks):
        obs = build_observation(world, cameras)
        cmd = executor.act(world, rng)
        new_world = step(world, cmd)
        # absolute-target action: the pose this tick's command drives to
        steps.append(StepRecord(
            t=world.time,
            observation=obs,
            action=ActionRecord(
                target=Pose2(new_world.arm.x, new_world.arm.y, new_world.arm.yaw),
                pwm_target=cmd.pwm_target,
            ),
        ))
        world = new_world
        if executor.done and success(task, world):
            return steps, world, True
    return steps, world, success(task, world)


def collect(task: TaskSpec, cases: list[CaseSetup], episodes_per_case: int,
            profile: ProficiencyProfile, seed: int, out_root: str | Path,
            cameras: tuple[CameraConfig, ...] = DEFAULT_CAMERAS,
            dataset_id: str | None = None) -> DatasetManifest:
    """Collect success-filtered demonstrations into a fresh dataset directory."""
    if episodes_per_case < 1:
        raise DataError("episodes_per_case must be >= 1")
    writer = DatasetWriter(
        out_root,
        dataset_id or f"{task.name}-{profile.name}-seed{seed}",
        camera_configs=tuple(
            {"kind": c.kind, "resolution": c.resolution, "zoom": c.zoom,
             "center_x": c.center_x, "center_y": c.center_y}
            for c in cameras),
    )
    counter = 0
    for case in cases:
        attempts = 0
        successes = 0
        for slot in range(episodes_per_case):
            saved = False
            for resample in range(MAX_RESAMPLES):
                ep_seed = int(np.random.SeedSequence(
                    entropy=seed,
                    spawn_key=(zlib.crc32(case.case_id.encode()), slot, resample),
                ).generate_state(1)[0])
                attempts += 1
                steps, _, ok = run_demonstration(task, case, profile, ep_seed, cameras)
                if ok:
                    successes += 1
                    writer.add(Episode(
                        episode_id=f"{task.name}-{case.case_id}-seed{seed}-s{slot}-r{resample}",
                        task_name=task.name,
                        case_id=case.case_id,
                        collector=profile.name,
                        created_at=f"sim+{counter * 60}s",
                        control_dt=DT,
                        camera_configs=cameras,
                        steps=tuple(steps),
                        outcome=True,
                    ))
                    counter += 1
                    saved = True
                    break
            if not saved or (attempts >= 2 * MAX_RESAMPLES
                             and successes / attempts < MIN_CASE_SUCCESS_RATE):
                raise DataError(
                    f"expert success rate too low on {task.name}/{case.case_id}: "
                    f"{successes}/{attempts} with profile {profile.name}")
    return writer.finalize()

"""Observation assembly shared by collection, teleoperation, and policy rollouts."""

from __future__ import annotations

import numpy as np

from .data.episode import Observation
from .sim.render import render
from .sim.types import CameraConfig, TaskSpec, WorldState

DEFAULT_CAMERAS = (
    CameraConfig(kind="global", resolution=16, zoom=1.0, center_x=0.5, center_y=0.5),
    CameraConfig(kind="wrist", resolution=16, zoom=4.0),
)


def feature_vector(world: WorldState) -> np.ndarray:
    """Flat scene descriptor: per object (x, y, size, color, shape), per receptacle (x, y, r)."""
    parts = []
    for obj in world.objects:
        parts.extend([obj.x, obj.y, obj.size, obj.color_index / 7.0, obj.shape_index / 2.0])
    for rec in world.receptacles:
        parts.extend([rec.x, rec.y, rec.radius])
    return np.array(parts, dtype=np.float64)


def feature_dim(task: TaskSpec) -> int:
    return 5 * task.object_count + 3 * task.receptacle_count


def build_observation(world: WorldState,
                      cameras: tuple[CameraConfig, ...] = DEFAULT_CAMERAS,
                      include_features: bool = True) -> Observation:
    by_kind = {c.kind: c for c in cameras}
    proprio = np.array([world.arm.x, world.arm.y, world.arm.yaw, world.gripper.pwm])
    return Observation(
        proprio=proprio,
        global_view=render(world, by_kind["global"]).astype(np.float32),
        wrist_view=render(world, by_kind["wrist"]).astype(np.float32),
        feature_vec=feature_vector(world) if include_features else None,
    )

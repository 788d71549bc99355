"""Core simulator dataclasses: poses, gripper, scene contents, task definitions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

# Workspace is the unit square, metres.
WORKSPACE_LO = 0.0
WORKSPACE_HI = 1.0

DT = 0.05  # fixed control tick, seconds (20 Hz)
V_MAX = 0.5  # m/s
VYAW_MAX = 2.0  # rad/s
PWM_SLEW = 4.0  # max pwm change per second
PWM_CLOSE = 0.6  # attach threshold (crossing upward)
PWM_OPEN = 0.4  # detach threshold (falling below)
GRASP_RADIUS = 0.03  # metres

HOME_POSE = (0.5, 0.1, 0.0)

MIN_OBJECT_SIZE = 0.01
MAX_OBJECT_SIZE = 0.15

SHAPE_SQUARE = 0
SHAPE_DISC = 1
SHAPE_TRIANGLE = 2


def wrap_yaw(yaw: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    wrapped = math.fmod(yaw + math.pi, 2.0 * math.pi)
    if wrapped <= 0.0:
        wrapped += 2.0 * math.pi
    return wrapped - math.pi


def clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


@dataclass(frozen=True)
class Pose2:
    x: float
    y: float
    yaw: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.yaw)):
            raise ValueError("non-finite pose")
        object.__setattr__(self, "yaw", wrap_yaw(self.yaw))


@dataclass(frozen=True)
class GripperState:
    pwm: float = 0.0
    attached_object: str | None = None

    def __post_init__(self):
        if not 0.0 <= self.pwm <= 1.0:
            raise ValueError(f"pwm out of range: {self.pwm}")
        # hysteresis: attachment persists down to the open threshold, not the close one
        if self.attached_object is not None and self.pwm < PWM_OPEN:
            raise ValueError("attached object with open gripper")


@dataclass(frozen=True)
class SceneObject:
    id: str
    x: float
    y: float
    size: float
    color_index: int
    shape_index: int
    graspable: bool = True

    def __post_init__(self):
        if not MIN_OBJECT_SIZE <= self.size <= MAX_OBJECT_SIZE:
            raise ValueError(f"object size out of range: {self.size}")


@dataclass(frozen=True)
class Receptacle:
    id: str
    x: float
    y: float
    radius: float
    stack: tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.stack)) != len(self.stack):
            raise ValueError("duplicate ids in receptacle stack")


@dataclass(frozen=True)
class WorldState:
    arm: Pose2
    gripper: GripperState
    objects: tuple[SceneObject, ...]
    receptacles: tuple[Receptacle, ...]
    tick_index: int = 0

    @property
    def time(self) -> float:
        return self.tick_index * DT

    def object_by_id(self, oid: str) -> SceneObject:
        for obj in self.objects:
            if obj.id == oid:
                return obj
        raise KeyError(oid)

    def receptacle_by_id(self, rid: str) -> Receptacle:
        for rec in self.receptacles:
            if rec.id == rid:
                return rec
        raise KeyError(rid)


@dataclass(frozen=True)
class ArmCommand:
    vx: float = 0.0
    vy: float = 0.0
    vyaw: float = 0.0
    pwm_target: float = 0.0

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in (self.vx, self.vy, self.vyaw, self.pwm_target))

    def within_limits(self) -> bool:
        return (
            abs(self.vx) <= V_MAX
            and abs(self.vy) <= V_MAX
            and abs(self.vyaw) <= VYAW_MAX
            and 0.0 <= self.pwm_target <= 1.0
        )

    def clamped(self) -> "ArmCommand":
        return ArmCommand(
            vx=clamp(self.vx, -V_MAX, V_MAX),
            vy=clamp(self.vy, -V_MAX, V_MAX),
            vyaw=clamp(self.vyaw, -VYAW_MAX, VYAW_MAX),
            pwm_target=clamp(self.pwm_target, 0.0, 1.0),
        )


@dataclass(frozen=True)
class CameraConfig:
    kind: str  # "global" | "wrist"
    resolution: int = 16
    zoom: float = 1.0
    center_x: float = 0.5
    center_y: float = 0.5

    def __post_init__(self):
        if self.kind not in ("global", "wrist"):
            raise ValueError(f"unknown camera kind: {self.kind}")
        if self.resolution not in (16, 24, 32):
            raise ValueError(f"unsupported resolution: {self.resolution}")
        if not self.zoom > 0:
            raise ValueError("zoom must be positive")


@dataclass(frozen=True)
class CaseSetup:
    case_id: str
    # each placement: (x, y, size, color_index, shape_index)
    object_placements: tuple[tuple[float, float, float, int, int], ...]
    # each placement: (x, y, radius)
    receptacle_placements: tuple[tuple[float, float, float], ...]
    rng_jitter: float = 0.0


@dataclass(frozen=True)
class TaskSpec:
    name: str
    object_count: int
    receptacle_count: int
    cases: tuple[CaseSetup, ...]
    uses_color: bool
    uses_size: bool
    uses_shape: bool
    logic_steps: int
    success_rule: str
    max_rollout_time: float = 20.0

    def __post_init__(self):
        if not self.cases:
            raise ValueError("task has no cases")
        if self.logic_steps < 1:
            raise ValueError("logic_steps must be >= 1")
        for case in self.cases:
            if len(case.object_placements) != self.object_count:
                raise ValueError(f"case {case.case_id}: object count mismatch")
            if len(case.receptacle_placements) != self.receptacle_count:
                raise ValueError(f"case {case.case_id}: receptacle count mismatch")

    def case(self, case_id: str) -> CaseSetup:
        for c in self.cases:
            if c.case_id == case_id:
                return c
        raise KeyError(case_id)


def replace_world(world: WorldState, **kwargs) -> WorldState:
    return replace(world, **kwargs)

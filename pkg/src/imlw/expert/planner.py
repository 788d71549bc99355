"""Waypoint planning for the builtin task analogs."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import PlanningError
from ..sim.types import Pose2, Receptacle, SceneObject, TaskSpec, WorldState

DEFAULT_TOLERANCE = 0.01


@dataclass(frozen=True)
class Waypoint:
    pose: Pose2
    pwm_target: float
    tolerance: float = DEFAULT_TOLERANCE


@dataclass(frozen=True)
class ExpertPlan:
    waypoints: tuple[Waypoint, ...]

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise PlanningError("plan needs at least two waypoints")


def _pick_and_place(obj: SceneObject, rec: Receptacle) -> list[Waypoint]:
    at_obj = Pose2(obj.x, obj.y, 0.0)
    at_rec = Pose2(rec.x, rec.y, 0.0)
    return [
        Waypoint(at_obj, 0.0),   # approach with the gripper open
        Waypoint(at_obj, 1.0),   # close to grasp
        Waypoint(at_rec, 1.0),   # carry
        Waypoint(at_rec, 0.0),   # release
    ]


def plan(task: TaskSpec, world: WorldState) -> ExpertPlan:
    """Waypoint sequence that, executed perfectly, satisfies the task's success rule."""
    rule = task.success_rule
    waypoints: list[Waypoint] = []
    if rule == "pick_place":
        waypoints = _pick_and_place(world.objects[0], world.receptacles[0])
    elif rule in ("color_match", "index_match"):
        # object i goes to receptacle i, in list order (red before green, etc.)
        for obj, rec in zip(world.objects, world.receptacles):
            waypoints.extend(_pick_and_place(obj, rec))
    elif rule == "stack_order":
        for obj in world.objects:
            waypoints.extend(_pick_and_place(obj, world.receptacles[0]))
    elif rule == "pick_smallest":
        target = min(world.objects, key=lambda o: o.size)
        waypoints = _pick_and_place(target, world.receptacles[0])
    elif rule == "pick_biggest":
        target = max(world.objects, key=lambda o: o.size)
        waypoints = _pick_and_place(target, world.receptacles[0])
    else:
        raise PlanningError(f"no planner for success rule {rule!r}")
    return ExpertPlan(waypoints=tuple(waypoints))

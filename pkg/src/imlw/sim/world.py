"""World construction, fixed-tick stepping, grasping, and success predicates."""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from ..errors import CommandError, ConfigurationError, PlacementError
from .types import (
    DT,
    GRASP_RADIUS,
    HOME_POSE,
    PWM_CLOSE,
    PWM_OPEN,
    PWM_SLEW,
    WORKSPACE_HI,
    WORKSPACE_LO,
    ArmCommand,
    CaseSetup,
    GripperState,
    Pose2,
    Receptacle,
    SceneObject,
    TaskSpec,
    WorldState,
    clamp,
)

PLACEMENT_RETRIES = 32


def _overlaps(placed: list[SceneObject], x: float, y: float, size: float) -> bool:
    for obj in placed:
        if math.hypot(obj.x - x, obj.y - y) < (obj.size + size) / 2.0:
            return True
    return False


def _in_workspace(x: float, y: float, margin: float = 0.0) -> bool:
    return (
        WORKSPACE_LO + margin <= x <= WORKSPACE_HI - margin
        and WORKSPACE_LO + margin <= y <= WORKSPACE_HI - margin
    )


def world_init(task: TaskSpec, case: CaseSetup, seed: int) -> WorldState:
    """Build the initial world for one trial: case placements plus seeded jitter."""
    if case not in task.cases:
        raise ConfigurationError(f"case {case.case_id} does not belong to task {task.name}")
    rng = np.random.default_rng(seed)

    objects: list[SceneObject] | None = None
    for _ in range(PLACEMENT_RETRIES):
        attempt: list[SceneObject] = []
        ok = True
        for i, (x, y, size, color, shape) in enumerate(case.object_placements):
            if case.rng_jitter > 0.0:
                # uniform draw in the jitter disc via rejection on the square
                while True:
                    dx, dy = rng.uniform(-case.rng_jitter, case.rng_jitter, size=2)
                    if dx * dx + dy * dy <= case.rng_jitter**2:
                        break
            else:
                dx = dy = 0.0
            px, py = x + dx, y + dy
            if not _in_workspace(px, py, margin=size / 2.0) or _overlaps(attempt, px, py, size):
                ok = False
                break
            attempt.append(SceneObject(id=f"obj{i}", x=px, y=py, size=size,
                                       color_index=color, shape_index=shape))
        if ok:
            objects = attempt
            break
    if objects is None:
        raise PlacementError(
            f"could not place case {case.case_id} without overlap in {PLACEMENT_RETRIES} draws")

    receptacles = tuple(
        Receptacle(id=f"rec{i}", x=x, y=y, radius=r)
        for i, (x, y, r) in enumerate(case.receptacle_placements)
    )
    return WorldState(
        arm=Pose2(*HOME_POSE),
        gripper=GripperState(pwm=0.0),
        objects=tuple(objects),
        receptacles=receptacles,
        tick_index=0,
    )


def step(world: WorldState, cmd: ArmCommand, dt: float = DT) -> WorldState:
    """Advance the world one fixed tick under an arm command."""
    if abs(dt - DT) > 1e-12:
        raise CommandError(f"dt must be the fixed tick {DT}, got {dt}")
    if not cmd.is_finite():
        raise CommandError("non-finite arm command")
    if not cmd.within_limits():
        raise CommandError("arm command exceeds velocity/pwm limits")

    arm = world.arm
    x = clamp(arm.x + cmd.vx * dt, WORKSPACE_LO, WORKSPACE_HI)
    y = clamp(arm.y + cmd.vy * dt, WORKSPACE_LO, WORKSPACE_HI)
    yaw = arm.yaw + cmd.vyaw * dt
    new_arm = Pose2(x, y, yaw)

    pwm = world.gripper.pwm
    max_delta = PWM_SLEW * dt
    new_pwm = pwm + clamp(cmd.pwm_target - pwm, -max_delta, max_delta)

    objects = list(world.objects)
    receptacles = list(world.receptacles)
    attached = world.gripper.attached_object

    if attached is None and pwm < PWM_CLOSE <= new_pwm:
        # closing across the threshold: attach the nearest graspable object in reach
        best = None
        best_d = GRASP_RADIUS
        for obj in objects:
            if not obj.graspable:
                continue
            d = math.hypot(obj.x - new_arm.x, obj.y - new_arm.y)
            if d <= best_d:
                best, best_d = obj, d
        if best is not None:
            attached = best.id
            receptacles = [
                replace(rec, stack=tuple(o for o in rec.stack if o != best.id))
                for rec in receptacles
            ]

    if attached is not None and new_pwm < PWM_OPEN:
        # releasing: the object settles where the arm is, and may land in a receptacle
        idx = next(i for i, o in enumerate(objects) if o.id == attached)
        objects[idx] = replace(objects[idx], x=new_arm.x, y=new_arm.y)
        landed = _nearest_receptacle_within(receptacles, new_arm.x, new_arm.y)
        if landed is not None:
            ri = receptacles.index(landed)
            receptacles[ri] = replace(landed, stack=landed.stack + (attached,))
        attached = None

    if attached is not None:
        idx = next(i for i, o in enumerate(objects) if o.id == attached)
        objects[idx] = replace(objects[idx], x=new_arm.x, y=new_arm.y)

    return WorldState(
        arm=new_arm,
        gripper=GripperState(pwm=new_pwm, attached_object=attached),
        objects=tuple(objects),
        receptacles=tuple(receptacles),
        tick_index=world.tick_index + 1,
    )


def _nearest_receptacle_within(receptacles: list[Receptacle], x: float, y: float) -> Receptacle | None:
    best = None
    best_d = math.inf
    for rec in receptacles:
        d = math.hypot(rec.x - x, rec.y - y)
        if d <= rec.radius and d < best_d:
            best, best_d = rec, d
    return best


# --- success predicates ------------------------------------------------------

def _in_receptacle(obj: SceneObject, rec: Receptacle) -> bool:
    return math.hypot(obj.x - rec.x, obj.y - rec.y) <= rec.radius


def _placed(world: WorldState, obj: SceneObject, rec: Receptacle) -> bool:
    return _in_receptacle(obj, rec) and world.gripper.attached_object != obj.id


def _success_pick_place(task: TaskSpec, world: WorldState) -> bool:
    return _placed(world, world.objects[0], world.receptacles[0])


def _success_color_match(task: TaskSpec, world: WorldState) -> bool:
    # object i belongs in receptacle i (cases are built color-aligned)
    return all(
        _placed(world, obj, rec) for obj, rec in zip(world.objects, world.receptacles)
    )


def _success_stack_order(task: TaskSpec, world: WorldState) -> bool:
    required = tuple(obj.id for obj in world.objects)
    return world.receptacles[0].stack == required


def _success_pick_extreme(task: TaskSpec, world: WorldState, pick_max: bool) -> bool:
    chooser = max if pick_max else min
    target = chooser(world.objects, key=lambda o: o.size)
    if not _placed(world, target, world.receptacles[0]):
        return False
    # distractors must stay out of the receptacle
    return all(
        not _in_receptacle(obj, world.receptacles[0])
        for obj in world.objects
        if obj.id != target.id
    )


SUCCESS_RULES = {
    "pick_place": _success_pick_place,
    "color_match": _success_color_match,
    "stack_order": _success_stack_order,
    "pick_smallest": lambda t, w: _success_pick_extreme(t, w, pick_max=False),
    "pick_biggest": lambda t, w: _success_pick_extreme(t, w, pick_max=True),
    "index_match": _success_color_match,
}


def success(task: TaskSpec, world: WorldState) -> bool:
    """Geometric success predicate for a task; pure function of the world."""
    try:
        rule = SUCCESS_RULES[task.success_rule]
    except KeyError:
        raise ConfigurationError(f"unknown success rule: {task.success_rule}") from None
    return rule(task, world)

"""Receding-horizon execution: sample a window of actions, run the first few, repeat."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..data.episode import ActionRecord
from ..deploy.types import TimedAction
from ..errors import NumericError
from ..obs import build_observation
from ..sim.types import DT, V_MAX, VYAW_MAX, ArmCommand, Pose2, TaskSpec, WorldState, clamp, wrap_yaw
from ..sim.world import step, success
from .policy import PolicyBundle, Predictor, sample_actions


def tracking_command(world: WorldState, target: Pose2, pwm_target: float) -> ArmCommand:
    """One-tick point tracking: drive toward the target pose at up to full speed."""
    return ArmCommand(
        vx=clamp((target.x - world.arm.x) / DT, -V_MAX, V_MAX),
        vy=clamp((target.y - world.arm.y) / DT, -V_MAX, V_MAX),
        vyaw=clamp(wrap_yaw(target.yaw - world.arm.yaw) / DT, -VYAW_MAX, VYAW_MAX),
        pwm_target=pwm_target,
    )


@dataclass
class RolloutResult:
    world: WorldState
    success: bool
    termination: str  # "success" | "timeout" | "diverged"
    arm_trace: list[tuple[float, float, float]] = field(default_factory=list)
    timed_actions: list[TimedAction] = field(default_factory=list)


def receding_horizon_rollout(policy: PolicyBundle, world: WorldState, task: TaskSpec,
                             rng: np.random.Generator,
                             predictor: Predictor | None = None) -> RolloutResult:
    """Observe, sample a horizon, execute the first `execute_steps`, repeat."""
    max_ticks = int(round(task.max_rollout_time / DT))
    result = RolloutResult(world=world, success=False, termination="timeout")
    result.arm_trace.append((world.arm.x, world.arm.y, world.arm.yaw))
    while world.tick_index < max_ticks:
        obs = build_observation(world, policy.cameras)
        try:
            actions = sample_actions(obs, policy, rng, predictor=predictor)
        except NumericError:
            result.world = world
            result.termination = "diverged"
            return result
        t_emit = world.time
        for k in range(policy.execute_steps):
            target = Pose2(actions[k, 0], actions[k, 1], actions[k, 2])
            record = ActionRecord(target=target, pwm_target=float(actions[k, 3]))
            result.timed_actions.append(TimedAction(
                action=record, desired_t=t_emit + (k + 1) * DT, emitted_t=t_emit))
            world = step(world, tracking_command(world, target, record.pwm_target))
            result.arm_trace.append((world.arm.x, world.arm.y, world.arm.yaw))
            if success(task, world):
                result.world = world
                result.success = True
                result.termination = "success"
                return result
            if world.tick_index >= max_ticks:
                break
    result.world = world
    result.success = success(task, world)
    result.termination = "success" if result.success else "timeout"
    return result

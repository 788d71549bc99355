"""Proportional waypoint-tracking controller with proficiency-dependent imperfections."""

from __future__ import annotations

import math

import numpy as np

from ..sim.types import V_MAX, VYAW_MAX, ArmCommand, WorldState, clamp, wrap_yaw
from .planner import ExpertPlan
from .profiles import ProficiencyProfile

K_P = 2.0          # 1/s
PWM_SETTLE = 0.05  # gripper considered settled when |pwm - target| <= this


def _noiseless_command(plan: ExpertPlan, index: int, world: WorldState,
                       profile: ProficiencyProfile) -> ArmCommand:
    wp = plan.waypoints[index]
    gain = profile.speed_factor * profile.overshoot_gain
    vx = clamp(K_P * (wp.pose.x - world.arm.x), -V_MAX, V_MAX) * gain
    vy = clamp(K_P * (wp.pose.y - world.arm.y), -V_MAX, V_MAX) * gain
    vyaw = clamp(K_P * wrap_yaw(wp.pose.yaw - world.arm.yaw), -VYAW_MAX, VYAW_MAX) * gain
    return ArmCommand(vx=vx, vy=vy, vyaw=vyaw, pwm_target=wp.pwm_target).clamped()


class PlanExecutor:
    """Walks a plan's waypoints, emitting one arm command per tick."""

    def __init__(self, plan: ExpertPlan, profile: ProficiencyProfile):
        self.plan = plan
        self.profile = profile
        self.index = 0

    @property
    def done(self) -> bool:
        return self.index >= len(self.plan.waypoints)

    def _maybe_advance(self, world: WorldState) -> None:
        while not self.done:
            wp = self.plan.waypoints[self.index]
            at_pose = math.hypot(wp.pose.x - world.arm.x, wp.pose.y - world.arm.y) <= wp.tolerance
            pwm_settled = abs(world.gripper.pwm - wp.pwm_target) <= PWM_SETTLE
            if at_pose and pwm_settled:
                self.index += 1
            else:
                break

    def act(self, world: WorldState, rng: np.random.Generator) -> ArmCommand:
        self._maybe_advance(world)
        if self.done:
            return ArmCommand(pwm_target=world.gripper.pwm)
        if self.profile.pause_prob > 0.0 and rng.random() < self.profile.pause_prob:
            return ArmCommand(pwm_target=world.gripper.pwm)
        cmd = _noiseless_command(self.plan, self.index, world, self.profile)
        if self.profile.tremor_std > 0.0:
            # tremor perturbs the commanded velocity so one tick moves ~tremor_std metres
            nx, ny = rng.normal(0.0, self.profile.tremor_std, size=2)
            cmd = ArmCommand(vx=cmd.vx + nx / 0.05, vy=cmd.vy + ny / 0.05,
                             vyaw=cmd.vyaw, pwm_target=cmd.pwm_target).clamped()
        return cmd


def act(plan: ExpertPlan, world: WorldState, profile: ProficiencyProfile,
        rng: np.random.Generator, index: int = 0) -> ArmCommand:
    """One-shot command toward waypoint `index`; stateless variant of PlanExecutor."""
    executor = PlanExecutor(plan, profile)
    executor.index = index
    return executor.act(world, rng)

"""Timestamp-gated execution: late actions are discarded, the clock never waits."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..diffusion.policy import PolicyBundle, Predictor, sample_actions
from ..errors import NumericError, StallError
from ..obs import build_observation
from ..sim.types import DT, ArmCommand, Pose2, TaskSpec, WorldState
from ..sim.world import step, success
from .types import LatencyModel, TimedAction

DEFAULT_SLACK = DT  # one control tick
STALL_HORIZONS = 3


@dataclass(frozen=True)
class LogEntry:
    emitted_t: float
    desired_t: float
    arrived_t: float
    verdict: str  # "executed" | "discarded"
    reason: str


@dataclass
class ExecutionLog:
    entries: list[LogEntry] = field(default_factory=list)

    def executed_count(self) -> int:
        return sum(1 for e in self.entries if e.verdict == "executed")

    def discarded_count(self) -> int:
        return sum(1 for e in self.entries if e.verdict == "discarded")

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps({
            "emitted_t": e.emitted_t, "desired_t": e.desired_t,
            "arrived_t": e.arrived_t, "verdict": e.verdict, "reason": e.reason,
        }) for e in self.entries)

    def write_jsonl(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl() + "\n")


def replay_verdicts(log: ExecutionLog, slack: float) -> list[str]:
    """Re-derive every verdict from logged timestamps alone."""
    return ["discarded" if e.arrived_t > e.desired_t + slack else "executed"
            for e in log.entries]


def execute_stream(bundle: PolicyBundle, world: WorldState, task: TaskSpec,
                   latency: LatencyModel, slack: float = DEFAULT_SLACK,
                   rng: np.random.Generator | None = None,
                   predictor: Predictor | None = None,
                   ) -> tuple[WorldState, ExecutionLog, str]:
    """Run the policy through a latency model; returns (world, log, termination)."""
    from ..diffusion.rollout import tracking_command  # import here: deploy.types feeds rollout

    if slack < 0:
        raise ValueError("slack must be >= 0")
    rng = rng if rng is not None else np.random.default_rng(0)
    log = ExecutionLog()
    max_ticks = int(round(task.max_rollout_time / DT))
    horizon_index = 0
    consecutive_all_discarded = 0
    while world.tick_index < max_ticks:
        obs = build_observation(world, bundle.cameras)
        try:
            actions = sample_actions(obs, bundle, rng, predictor=predictor)
        except NumericError:
            return world, log, "diverged"
        t_emit = world.time
        delays = latency.delays(bundle.execute_steps, key=horizon_index)
        any_executed = False
        for k in range(bundle.execute_steps):
            desired_t = t_emit + (k + 1) * DT
            arrived_t = t_emit + float(delays[k])
            target = Pose2(actions[k, 0], actions[k, 1], actions[k, 2])
            pwm = float(actions[k, 3])
            if arrived_t > desired_t + slack:
                log.entries.append(LogEntry(t_emit, desired_t, arrived_t, "discarded",
                                            "arrived after deadline"))
                # the world still ticks; the arm holds its last commanded state
                world = step(world, ArmCommand(pwm_target=world.gripper.pwm))
            else:
                log.entries.append(LogEntry(t_emit, desired_t, arrived_t, "executed", ""))
                any_executed = True
                world = step(world, tracking_command(world, target, pwm))
            if success(task, world):
                return world, log, "success"
            if world.tick_index >= max_ticks:
                break
        consecutive_all_discarded = 0 if any_executed else consecutive_all_discarded + 1
        if consecutive_all_discarded >= STALL_HORIZONS:
            raise StallError(
                f"every action discarded for {STALL_HORIZONS} consecutive horizons")
        horizon_index += 1
    return world, log, "success" if success(task, world) else "timeout"

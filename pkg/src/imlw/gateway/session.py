"""Deterministic teleoperation session: message handling and world ticking.

The network layer feeds messages in and forwards the replies; all state lives
here so a recorded message log replays to a bit-identical episode.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..data.episode import ActionRecord, Episode, StepRecord
from ..data.manifest import DatasetWriter
from ..obs import DEFAULT_CAMERAS, build_observation
from ..sim.tasks import task_to_dict
from ..sim.types import DT, ArmCommand, CameraConfig, Pose2, TaskSpec, WorldState
from ..sim.world import step, world_init
from .wire import WIRE_SCHEMA, ack_message, error_message, validate_client_message

STATE_EVERY_TICKS = 2  # 20 Hz sim, 10 Hz state broadcast


@dataclass
class PendingCommand:
    vx: float = 0.0
    vy: float = 0.0
    vyaw: float = 0.0
    pwm_target: float = 0.0
    clutch: bool = False


class GatewaySession:
    """One operator session: bind task/case at hello, drive, record, save."""

    def __init__(self, tasks: list[TaskSpec], out_root: str | Path, seed: int = 0,
                 cameras: tuple[CameraConfig, ...] = DEFAULT_CAMERAS,
                 dataset_id: str = "teleop"):
        self.tasks = {t.name: t for t in tasks}
        self.cameras = cameras
        self.seed = seed
        self.writer = DatasetWriter(
            out_root, dataset_id,
            camera_configs=tuple(
                {"kind": c.kind, "resolution": c.resolution, "zoom": c.zoom,
                 "center_x": c.center_x, "center_y": c.center_y} for c in cameras))
        self.collector = ""
        self.task: TaskSpec | None = None
        self.case_id: str | None = None
        self.world: WorldState | None = None
        self.recording = False
        self.pending = PendingCommand()
        self.buffer: list[StepRecord] = []
        self.saved_count = 0
        self.out_seq = 0

    # --- message handling ----------------------------------------------------

    def _next_seq(self) -> int:
        self.out_seq += 1
        return self.out_seq

    def handle_message(self, msg: dict) -> list[dict]:
        problem = validate_client_message(msg)
        if problem is not None:
            return [error_message(msg.get("seq", -1) if isinstance(msg, dict) else -1, problem)]
        handler = getattr(self, f"_on_{msg['type']}")
        return handler(msg)

    def _on_hello(self, msg: dict) -> list[dict]:
        self.collector = msg.get("collector", self.collector)
        task_name = msg.get("task")
        if task_name is not None:
            if task_name not in self.tasks:
                return [error_message(msg["seq"], f"unknown task: {task_name}")]
            task = self.tasks[task_name]
            case_id = msg.get("case", task.cases[0].case_id)
            try:
                case = task.case(case_id)
            except KeyError:
                return [error_message(msg["seq"], f"unknown case: {case_id}")]
            self.task = task
            self.case_id = case_id
            self.world = world_init(task, case, self.seed)
        return [{"type": "hello", "seq": msg["seq"], "schema": WIRE_SCHEMA}]

    def _on_list_tasks(self, msg: dict) -> list[dict]:
        return [{"type": "list_tasks", "seq": msg["seq"],
                 "tasks": [task_to_dict(t) for t in self.tasks.values()]}]

    def _on_control(self, msg: dict) -> list[dict]:
        if self.world is None:
            return [error_message(msg["seq"], "no task bound")]
        self.pending = PendingCommand(
            vx=float(msg["vx"]), vy=float(msg["vy"]), vyaw=float(msg["vyaw"]),
            pwm_target=float(msg["pwm_target"]), clutch=bool(msg["clutch"]))
        return [ack_message(msg["seq"])]

    def _on_record_start(self, msg: dict) -> list[dict]:
        if self.task is None or self.world is None:
            return [error_message(msg["seq"], "record_start requires a bound task/case")]
        if self.recording:
            return [error_message(msg["seq"], "already recording")]
        self.recording = True
        self.buffer = []
        return [ack_message(msg["seq"])]

    def _on_record_stop(self, msg: dict) -> list[dict]:
        if not self.recording:
            return [error_message(msg["seq"], "not recording")]
        self.recording = False
        return [ack_message(msg["seq"])]

    def _on_save(self, msg: dict) -> list[dict]:
        if self.recording:
            return [error_message(msg["seq"], "stop the recording before saving")]
        if not self.buffer:
            return [error_message(msg["seq"], "nothing recorded")]
        if not self.collector:
            return [error_message(msg["seq"], "collector name required")]
        episode_id = f"teleop-{self.task.name}-{self.case_id}-{self.saved_count}"
        episode = Episode(
            episode_id=episode_id,
            task_name=self.task.name,
            case_id=self.case_id,
            collector=self.collector,
            created_at=f"teleop+{self.saved_count}",
            control_dt=DT,
            camera_configs=self.cameras,
            steps=tuple(self.buffer),
            outcome=bool(msg["outcome"]),
        )
        self.writer.add(episode)
        self.writer.finalize()
        self.saved_count += 1
        self.buffer = []
        return [ack_message(msg["seq"], episode_id=episode_id)]

    def _on_discard(self, msg: dict) -> list[dict]:
        self.buffer = []
        self.recording = False
        return [ack_message(msg["seq"])]

    # --- simulation ----------------------------------------------------------

    def effective_command(self) -> ArmCommand:
        p = self.pending
        if self.world is None:
            return ArmCommand()
        if not p.clutch:
            # clutch disengaged: freeze motion, hold the gripper
            return ArmCommand(pwm_target=self.world.gripper.pwm)
        return ArmCommand(vx=p.vx, vy=p.vy, vyaw=p.vyaw, pwm_target=p.pwm_target).clamped()

    def tick(self) -> None:
        """Advance one fixed 20 Hz step, appending to the recording buffer."""
        if self.world is None:
            return
        cmd = self.effective_command()
        obs = build_observation(self.world, self.cameras) if self.recording else None
        t_before = self.world.time
        new_world = step(self.world, cmd)
        if self.recording:
            self.buffer.append(StepRecord(
                t=t_before,
                observation=obs,
                action=ActionRecord(
                    target=Pose2(new_world.arm.x, new_world.arm.y, new_world.arm.yaw),
                    pwm_target=cmd.pwm_target),
            ))
        self.world = new_world

    def state_message(self) -> dict:
        w = self.world
        base = {"type": "state", "seq": self._next_seq()}
        if w is None:
            return {**base, "time": 0.0, "bound": False}
        return {
            **base,
            "time": w.time,
            "arm": {"x": w.arm.x, "y": w.arm.y, "yaw": w.arm.yaw},
            "pwm": w.gripper.pwm,
            "recording": self.recording,
            "clutch": self.pending.clutch,
            "objects": [
                {"id": o.id, "x": o.x, "y": o.y, "size": o.size,
                 "color": o.color_index, "shape": o.shape_index}
                for o in w.objects
            ],
            "receptacles": [
                {"id": r.id, "x": r.x, "y": r.y, "radius": r.radius,
                 "stack": list(r.stack)}
                for r in w.receptacles
            ],
        }

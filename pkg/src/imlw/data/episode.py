"""Episode container: types, validation, and the jsonl+blob on-disk format.

Layout per episode: `<id>.jsonl` holds a header line plus one JSON line per
step; `<id>.blob` holds every raster as a little-endian record of
[ndim u32][extents u32...][float32 payload], row-major.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import SchemaError, TruncatedPayloadError
from ..sim.types import DT, WORKSPACE_HI, WORKSPACE_LO, CameraConfig, Pose2

SCHEMA_VERSION = "iml-v1"


@dataclass(frozen=True)
class ActionRecord:
    target: Pose2
    pwm_target: float


@dataclass(frozen=True)
class Observation:
    proprio: np.ndarray       # (4,) float64: x, y, yaw, pwm
    global_view: np.ndarray   # (res, res, 3) float32
    wrist_view: np.ndarray    # (res, res, 3) float32
    feature_vec: np.ndarray | None = None  # (k,) float64

    def __post_init__(self):
        object.__setattr__(self, "proprio", np.asarray(self.proprio, dtype=np.float64))
        object.__setattr__(self, "global_view", np.asarray(self.global_view, dtype=np.float32))
        object.__setattr__(self, "wrist_view", np.asarray(self.wrist_view, dtype=np.float32))
        if self.feature_vec is not None:
            object.__setattr__(self, "feature_vec", np.asarray(self.feature_vec, dtype=np.float64))


@dataclass(frozen=True)
class StepRecord:
    t: float
    observation: Observation
    action: ActionRecord


@dataclass(frozen=True)
class Episode:
    episode_id: str
    task_name: str
    case_id: str
    collector: str
    created_at: str
    control_dt: float
    camera_configs: tuple[CameraConfig, ...]
    steps: tuple[StepRecord, ...]
    outcome: bool


def episodes_equal(a: Episode, b: Episode) -> bool:
    """Structural equality including raster contents."""
    if (a.episode_id, a.task_name, a.case_id, a.collector, a.created_at,
            a.control_dt, a.camera_configs, a.outcome) != \
       (b.episode_id, b.task_name, b.case_id, b.collector, b.created_at,
            b.control_dt, b.camera_configs, b.outcome):
        return False
    if len(a.steps) != len(b.steps):
        return False
    for sa, sb in zip(a.steps, b.steps):
        if sa.t != sb.t or sa.action != sb.action:
            return False
        oa, ob = sa.observation, sb.observation
        if not np.array_equal(oa.proprio, ob.proprio):
            return False
        if not np.array_equal(oa.global_view, ob.global_view):
            return False
        if not np.array_equal(oa.wrist_view, ob.wrist_view):
            return False
        if (oa.feature_vec is None) != (ob.feature_vec is None):
            return False
        if oa.feature_vec is not None and not np.array_equal(oa.feature_vec, ob.feature_vec):
            return False
    return True


# --- validation --------------------------------------------------------------

def validate_episode(episode: Episode) -> list[str]:
    """Every violated invariant, as human-readable strings; empty means ok."""
    violations: list[str] = []
    if not episode.steps:
        violations.append("episode has no steps")
    if abs(episode.control_dt - DT) > 1e-12:
        violations.append(f"control_dt {episode.control_dt} does not match sim tick {DT}")
    prev_t = -1.0
    resolutions = {c.kind: c.resolution for c in episode.camera_configs}
    for i, step in enumerate(episode.steps):
        if step.t < 0:
            violations.append(f"step {i}: negative timestamp")
        if step.t <= prev_t:
            violations.append(f"step {i}: non-monotone timestamps")
        prev_t = step.t
        tgt = step.action.target
        if not (WORKSPACE_LO <= tgt.x <= WORKSPACE_HI and WORKSPACE_LO <= tgt.y <= WORKSPACE_HI):
            violations.append(f"step {i}: out-of-workspace action")
        if not 0.0 <= step.action.pwm_target <= 1.0:
            violations.append(f"step {i}: pwm_target out of [0,1]")
        obs = step.observation
        for name, raster in (("global_view", obs.global_view), ("wrist_view", obs.wrist_view)):
            res = resolutions.get(name.split("_")[0], None)
            if raster.ndim != 3 or raster.shape[2] != 3 or raster.shape[0] != raster.shape[1]:
                violations.append(f"step {i}: {name} raster shape mismatch")
            elif res is not None and raster.shape[0] != res:
                violations.append(f"step {i}: {name} resolution {raster.shape[0]} != configured {res}")
        if obs.proprio.shape != (4,):
            violations.append(f"step {i}: proprio shape mismatch")
    return violations


# --- serialization -----------------------------------------------------------

def _blob_append(blob: bytearray, arr: np.ndarray) -> int:
    offset = len(blob)
    a = np.ascontiguousarray(arr, dtype="<f4")
    blob += struct.pack("<I", a.ndim)
    blob += struct.pack(f"<{a.ndim}I", *a.shape)
    blob += a.tobytes()
    return offset


def _blob_read(blob: bytes, offset: int) -> np.ndarray:
    try:
        (ndim,) = struct.unpack_from("<I", blob, offset)
        shape = struct.unpack_from(f"<{ndim}I", blob, offset + 4)
        start = offset + 4 + 4 * ndim
        count = int(np.prod(shape)) if shape else 1
        end = start + 4 * count
        if end > len(blob):
            raise TruncatedPayloadError(f"blob record at offset {offset} extends past end")
        return np.frombuffer(blob[start:end], dtype="<f4").reshape(shape).astype(np.float32)
    except struct.error as e:
        raise TruncatedPayloadError(f"blob record at offset {offset}: {e}") from None


def _camera_to_dict(c: CameraConfig) -> dict:
    return {"kind": c.kind, "resolution": c.resolution, "zoom": c.zoom,
            "center_x": c.center_x, "center_y": c.center_y}


def _camera_from_dict(d: dict) -> CameraConfig:
    return CameraConfig(**d)


def write_episode(episode: Episode, directory: str | Path) -> Path:
    """Write `<id>.jsonl` + `<id>.blob` under `directory`; returns the jsonl path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    blob = bytearray()
    lines = []
    header = {
        "schema_version": SCHEMA_VERSION,
        "episode_id": episode.episode_id,
        "task_name": episode.task_name,
        "case_id": episode.case_id,
        "collector": episode.collector,
        "created_at": episode.created_at,
        "control_dt": episode.control_dt,
        "camera_configs": [_camera_to_dict(c) for c in episode.camera_configs],
        "outcome": episode.outcome,
        "num_steps": len(episode.steps),
    }
    lines.append(json.dumps(header))
    for step in episode.steps:
        obs = step.observation
        rec = {
            "t": step.t,
            "proprio": obs.proprio.tolist(),
            "global_view_offset": _blob_append(blob, obs.global_view),
            "wrist_view_offset": _blob_append(blob, obs.wrist_view),
            "feature_vec": None if obs.feature_vec is None else obs.feature_vec.tolist(),
            "action": {
                "x": step.action.target.x,
                "y": step.action.target.y,
                "yaw": step.action.target.yaw,
                "pwm_target": step.action.pwm_target,
            },
        }
        lines.append(json.dumps(rec))
    jsonl_path = directory / f"{episode.episode_id}.jsonl"
    jsonl_path.write_text("\n".join(lines) + "\n")
    (directory / f"{episode.episode_id}.blob").write_bytes(bytes(blob))
    return jsonl_path


def read_episode(jsonl_path: str | Path) -> Episode:
    jsonl_path = Path(jsonl_path)
    blob_path = jsonl_path.with_suffix(".blob")
    lines = jsonl_path.read_text().splitlines()
    if not lines:
        raise TruncatedPayloadError(f"{jsonl_path}: empty file")
    header = json.loads(lines[0])
    if header.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(
            f"{jsonl_path}: expected schema {SCHEMA_VERSION}, got {header.get('schema_version')}")
    if header["num_steps"] != len(lines) - 1:
        raise TruncatedPayloadError(
            f"{jsonl_path}: header declares {header['num_steps']} steps, found {len(lines) - 1}")
    blob = blob_path.read_bytes()
    steps = []
    for line in lines[1:]:
        rec = json.loads(line)
        obs = Observation(
            proprio=np.array(rec["proprio"], dtype=np.float64),
            global_view=_blob_read(blob, rec["global_view_offset"]),
            wrist_view=_blob_read(blob, rec["wrist_view_offset"]),
            feature_vec=None if rec["feature_vec"] is None
            else np.array(rec["feature_vec"], dtype=np.float64),
        )
        act = rec["action"]
        steps.append(StepRecord(
            t=rec["t"],
            observation=obs,
            action=ActionRecord(target=Pose2(act["x"], act["y"], act["yaw"]),
                                pwm_target=act["pwm_target"]),
        ))
    return Episode(
        episode_id=header["episode_id"],
        task_name=header["task_name"],
        case_id=header["case_id"],
        collector=header["collector"],
        created_at=header["created_at"],
        control_dt=header["control_dt"],
        camera_configs=tuple(_camera_from_dict(d) for d in header["camera_configs"]),
        steps=tuple(steps),
        outcome=header["outcome"],
    )

"""Policy bundle: configs + parameters + schedule + stats, the training loss,
and reverse-process action sampling."""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np

from ..data.episode import Observation
from ..data.stats import NormalizationStats
from ..errors import ConfigurationError, DataError, NumericError, SchemaError, TruncatedPayloadError
from ..net.autodiff import Tensor
from ..net.encoders import EncoderConfig, encode, prepare_obs
from ..net.noisenets import NoiseNetConfig, predict_noise
from ..net.params import ParameterSet, config_hash, params_from_bytes, params_to_bytes
from ..obs import DEFAULT_CAMERAS
from ..sim.types import WORKSPACE_HI, WORKSPACE_LO, CameraConfig
from .schedule import DiffusionSchedule, q_sample

BUNDLE_FORMAT = "imlw-bundle-v1"

# predictor(x_t: (B,H,A), t: (B,)) -> (B,H,A); used by tests to stub the network
Predictor = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PolicyBundle:
    encoder_config: EncoderConfig
    noisenet_config: NoiseNetConfig
    params: ParameterSet
    schedule: DiffusionSchedule
    stats: NormalizationStats
    execute_steps: int = 4
    cameras: tuple[CameraConfig, ...] = DEFAULT_CAMERAS

    def __post_init__(self):
        if not 1 <= self.execute_steps <= self.noisenet_config.horizon:
            raise ConfigurationError("execute_steps must lie in [1, horizon]")

    @property
    def horizon(self) -> int:
        return self.noisenet_config.horizon

    @property
    def action_dim(self) -> int:
        return self.noisenet_config.action_dim

    def config_dict(self) -> dict:
        return {
            "encoder": self.encoder_config.to_dict(),
            "noisenet": self.noisenet_config.to_dict(),
            "execute_steps": self.execute_steps,
        }

    def config_hash(self) -> str:
        return config_hash(self.config_dict())

    def with_params(self, params: ParameterSet) -> "PolicyBundle":
        return replace(self, params=params)


def training_loss_prepared(prepared: dict[str, np.ndarray], x0: np.ndarray,
                           policy: PolicyBundle, rng: np.random.Generator,
                           predictor: Predictor | None = None) -> Tensor:
    """Noise-prediction MSE over already-prepared observation arrays."""
    b = x0.shape[0]
    if b == 0:
        raise DataError("empty training batch")
    num_steps = policy.schedule.num_steps
    t = rng.integers(1, num_steps + 1, size=b)
    eps = rng.standard_normal(x0.shape)
    x_t = q_sample(x0, t, eps, policy.schedule)
    if predictor is not None:
        pred = Tensor(predictor(x_t, t))
    else:
        emb = encode(prepared, policy.encoder_config, policy.params)
        pred = predict_noise(x_t, t, emb, policy.noisenet_config, policy.params,
                             num_steps=num_steps)
    diff = pred - Tensor(eps)
    return (diff * diff).mean()


def training_loss(batch: list[tuple[Observation, np.ndarray]], policy: PolicyBundle,
                  rng: np.random.Generator, predictor: Predictor | None = None) -> Tensor:
    """Noise-prediction MSE over a batch of (observation, normalized action window)."""
    if not batch:
        raise DataError("empty training batch")
    observations = [obs for obs, _ in batch]
    x0 = np.stack([w for _, w in batch])  # (B, H, A), already normalized
    prepared = None
    if predictor is None:
        prepared = prepare_obs(observations, policy.stats, policy.encoder_config)
    return training_loss_prepared(prepared, x0, policy, rng, predictor=predictor)


def sample_actions(obs: Observation | None, policy: PolicyBundle,
                   rng: np.random.Generator,
                   predictor: Predictor | None = None) -> np.ndarray:
    """Reverse-process sample of H denormalized actions, clamped to the workspace."""
    sched = policy.schedule
    h, a = policy.horizon, policy.action_dim
    x = rng.standard_normal((1, h, a))

    emb = None
    if predictor is None:
        if obs is None:
            raise ConfigurationError("an observation is required without a stub predictor")
        prepared = prepare_obs([obs], policy.stats, policy.encoder_config)
        emb = encode(prepared, policy.encoder_config, policy.params)

    for t in range(sched.num_steps, 0, -1):
        t_batch = np.array([t])
        if predictor is not None:
            eps_hat = predictor(x, t_batch)
        else:
            eps_hat = predict_noise(x, t_batch, emb, policy.noisenet_config,
                                    policy.params, num_steps=sched.num_steps).value
        beta = sched.betas[t - 1]
        alpha = sched.alphas[t - 1]
        ab = sched.alpha_bars[t - 1]
        x = (x - beta / np.sqrt(1.0 - ab) * eps_hat) / np.sqrt(alpha)
        if t > 1:
            x = x + np.sqrt(beta) * rng.standard_normal(x.shape)
        if not np.all(np.isfinite(x)):
            raise NumericError(f"sampling diverged at diffusion step {t}")

    actions = policy.stats.denormalize_actions(x[0])  # (H, A)
    actions[:, 0] = np.clip(actions[:, 0], WORKSPACE_LO, WORKSPACE_HI)
    actions[:, 1] = np.clip(actions[:, 1], WORKSPACE_LO, WORKSPACE_HI)
    actions[:, 3] = np.clip(actions[:, 3], 0.0, 1.0)
    return actions


# --- serialization -----------------------------------------------------------

def save_bundle(policy: PolicyBundle, path: str | Path) -> None:
    header = json.dumps({
        "format": BUNDLE_FORMAT,
        "encoder": policy.encoder_config.to_dict(),
        "noisenet": policy.noisenet_config.to_dict(),
        "schedule": policy.schedule.to_dict(),
        "stats": policy.stats.to_dict(),
        "execute_steps": policy.execute_steps,
        "cameras": [{"kind": c.kind, "resolution": c.resolution, "zoom": c.zoom,
                     "center_x": c.center_x, "center_y": c.center_y}
                    for c in policy.cameras],
    }).encode()
    blob = params_to_bytes(policy.params, policy.config_hash())
    with open(path, "wb") as f:
        f.write(struct.pack("<Q", len(header)))
        f.write(header)
        f.write(blob)


def load_bundle(path: str | Path) -> PolicyBundle:
    raw = Path(path).read_bytes()
    if len(raw) < 8:
        raise TruncatedPayloadError(f"{path}: too short")
    (hlen,) = struct.unpack_from("<Q", raw, 0)
    header = json.loads(raw[8:8 + hlen].decode())
    if header.get("format") != BUNDLE_FORMAT:
        raise SchemaError(f"{path}: expected {BUNDLE_FORMAT}, got {header.get('format')}")
    params, _ = params_from_bytes(raw[8 + hlen:], origin=str(path))
    return PolicyBundle(
        encoder_config=EncoderConfig.from_dict(header["encoder"]),
        noisenet_config=NoiseNetConfig.from_dict(header["noisenet"]),
        params=params,
        schedule=DiffusionSchedule.from_dict(header["schedule"]),
        stats=NormalizationStats.from_dict(header["stats"]),
        execute_steps=header["execute_steps"],
        cameras=tuple(CameraConfig(**c) for c in header["cameras"]),
    )

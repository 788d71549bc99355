"""Epoch-based training, warm-start fine-tuning, and threshold search."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from ..data.manifest import DatasetManifest
from ..data.stats import NormalizationStats, action_matrix, compute_stats
from ..diffusion.policy import PolicyBundle, training_loss_prepared
from ..diffusion.schedule import DiffusionSchedule, make_schedule
from ..errors import ConfigurationError, DataError, NumericError
from ..net import EncoderConfig, NoiseNetConfig, gradients, init_params
from ..net.encoders import prepare_obs
from ..sim.types import CameraConfig
from .optim import Adam
from .registry import CheckpointRecord, CheckpointRegistry, checkpoint_epochs

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int
    batch_size: int = 64
    learning_rate: float = 1e-3
    checkpoint_every: int = 50
    seed: int = 0
    warm_start: str | None = None  # path to a base checkpoint bundle

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigurationError("epochs must be >= 1")
        if self.checkpoint_every < 1:
            raise ConfigurationError("checkpoint_every must be >= 1")

    def to_dict(self) -> dict:
        return {"epochs": self.epochs, "batch_size": self.batch_size,
                "learning_rate": self.learning_rate,
                "checkpoint_every": self.checkpoint_every, "seed": self.seed,
                "warm_start": self.warm_start}


class WindowDataset:
    """All training windows of a manifest, with observations prepared once."""

    def __init__(self, manifest: DatasetManifest, stats: NormalizationStats,
                 encoder_config: EncoderConfig, horizon: int):
        observations = []
        windows = []
        for episode in manifest.iter_episodes():
            actions = stats.normalize_actions(action_matrix(episode))
            n = actions.shape[0]
            padded = np.concatenate(
                [actions, np.repeat(actions[-1:], horizon, axis=0)], axis=0)
            for i in range(n):
                windows.append(padded[i:i + horizon])
            observations.extend(s.observation for s in episode.steps)
        if not windows:
            raise DataError("manifest yields no training windows")
        self.x0 = np.stack(windows)
        self.prepared = prepare_obs(observations, stats, encoder_config)

    def __len__(self) -> int:
        return self.x0.shape[0]

    def batch(self, idx: np.ndarray) -> tuple[dict[str, np.ndarray], np.ndarray]:
        return {k: v[idx] for k, v in self.prepared.items()}, self.x0[idx]


def _resolved_encoder_config(manifest: DatasetManifest,
                             encoder_config: EncoderConfig) -> EncoderConfig:
    """Fill lowdim_dim/resolution from the dataset's first episode."""
    episode = manifest.load_episode(manifest.episodes[0])
    obs = episode.steps[0].observation
    lowdim = 4 if obs.feature_vec is None else 4 + obs.feature_vec.size
    resolution = obs.global_view.shape[0]
    return replace(encoder_config, lowdim_dim=lowdim, resolution=resolution)


def _manifest_cameras(manifest: DatasetManifest) -> tuple[CameraConfig, ...]:
    return tuple(CameraConfig(**c) for c in manifest.camera_configs)


def _run_epochs(dataset: WindowDataset, policy: PolicyBundle, config: TrainConfig,
                registry: CheckpointRegistry, parent_id: str | None) -> CheckpointRegistry:
    optimizer = Adam(policy.params, learning_rate=config.learning_rate)
    ckpt_epochs = set(checkpoint_epochs(config.epochs, config.checkpoint_every))
    n = len(dataset)
    for epoch in range(1, config.epochs + 1):
        rng = np.random.default_rng((config.seed, 0xEB, epoch))
        perm = rng.permutation(n)
        losses = []
        for start in range(0, n, config.batch_size):
            idx = perm[start:start + config.batch_size]
            prepared, x0 = dataset.batch(idx)
            loss = training_loss_prepared(prepared, x0, policy, rng)
            if not np.isfinite(loss.value):
                err = NumericError(
                    f"non-finite loss at epoch {epoch}, batch {start // config.batch_size}")
                err.registry = registry
                raise err
            grads = gradients(loss, policy.params)
            optimizer.step(grads)
            losses.append(float(loss.value))
        registry.loss_trace.append(float(np.mean(losses)))
        if epoch in ckpt_epochs:
            registry.add(CheckpointRecord(
                checkpoint_id=f"{registry.run_id}-e{epoch}",
                epoch=epoch,
                bundle=policy.with_params(policy.params.copy()),
                loss_trace=tuple(registry.loss_trace),
                config_hash=policy.config_hash(),
                parent_id=parent_id,
            ))
            log.info("run %s: checkpoint at epoch %d (loss %.4f)",
                     registry.run_id, epoch, registry.loss_trace[-1])
    return registry


def train(manifest: DatasetManifest, encoder_config: EncoderConfig,
          noisenet_config: NoiseNetConfig, config: TrainConfig,
          schedule: DiffusionSchedule | None = None,
          execute_steps: int = 4, run_id: str | None = None) -> CheckpointRegistry:
    """Fresh training run over a manifest; checkpoints on cadence plus the final epoch."""
    if len(manifest) == 0:
        raise DataError("cannot train on an empty manifest")
    enc_cfg = _resolved_encoder_config(manifest, encoder_config)
    stats = compute_stats(manifest)
    policy = PolicyBundle(
        encoder_config=enc_cfg,
        noisenet_config=noisenet_config,
        params=init_params(enc_cfg, noisenet_config, config.seed),
        schedule=schedule or make_schedule(),
        stats=stats,
        execute_steps=execute_steps,
        cameras=_manifest_cameras(manifest),
    )
    dataset = WindowDataset(manifest, stats, enc_cfg, noisenet_config.horizon)
    registry = CheckpointRegistry(
        run_id=run_id or f"{manifest.dataset_id}-seed{config.seed}",
        dataset_id=manifest.dataset_id,
        config={"train": config.to_dict(), "policy": policy.config_dict()},
    )
    return _run_epochs(dataset, policy, config, registry, parent_id=None)


def finetune(manifest: DatasetManifest, base: CheckpointRecord,
             config: TrainConfig, run_id: str | None = None) -> CheckpointRegistry:
    """Warm-start training from an existing checkpoint; lineage recorded via parent id."""
    if len(manifest) == 0:
        raise DataError("cannot fine-tune on an empty manifest")
    bundle = base.bundle
    derived = _resolved_encoder_config(manifest, bundle.encoder_config)
    if derived != bundle.encoder_config:
        raise ConfigurationError(
            f"base checkpoint layout {bundle.encoder_config} does not match dataset {derived}")
    policy = bundle.with_params(bundle.params.copy())
    # stats stay those of the base bundle: its parameters were trained under them
    dataset = WindowDataset(manifest, policy.stats, policy.encoder_config,
                            policy.noisenet_config.horizon)
    registry = CheckpointRegistry(
        run_id=run_id or f"{manifest.dataset_id}-ft-{base.checkpoint_id}-seed{config.seed}",
        dataset_id=manifest.dataset_id,
        config={"train": config.to_dict(), "policy": policy.config_dict(),
                "parent": base.checkpoint_id},
    )
    return _run_epochs(dataset, policy, config, registry, parent_id=base.checkpoint_id)


def epochs_to_threshold(manifest: DatasetManifest, encoder_config: EncoderConfig,
                        noisenet_config: NoiseNetConfig, config: TrainConfig,
                        task, vpr_threshold: float, evaluators, repeats: int = 5,
                        base: CheckpointRecord | None = None) -> int | None:
    """First checkpoint epoch whose VPR reaches the threshold, or None within budget."""
    from ..evaluation.vpr import vpr  # local import to avoid a module cycle

    if base is not None:
        registry = finetune(manifest, base, config)
    else:
        registry = train(manifest, encoder_config, noisenet_config, config)
    for record in registry.records:
        report = vpr(task, record.bundle, evaluators, repeats=repeats)
        if report.vpr >= vpr_threshold:
            return record.epoch
    return None

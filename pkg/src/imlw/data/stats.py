"""Normalization statistics over dataset actions and low-dimensional observations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from .episode import Episode
from .manifest import DatasetManifest

STD_FLOOR = 1e-6


@dataclass(frozen=True)
class NormalizationStats:
    action_mean: np.ndarray  # (4,)
    action_std: np.ndarray   # (4,) clamped at STD_FLOOR
    obs_mean: np.ndarray     # (4 + feature dim,)
    obs_std: np.ndarray

    def normalize_actions(self, actions: np.ndarray) -> np.ndarray:
        return (actions - self.action_mean) / self.action_std

    def denormalize_actions(self, actions: np.ndarray) -> np.ndarray:
        return actions * self.action_std + self.action_mean

    def normalize_obs_features(self, feats: np.ndarray) -> np.ndarray:
        return (feats - self.obs_mean) / self.obs_std

    def to_dict(self) -> dict:
        return {
            "action_mean": self.action_mean.tolist(),
            "action_std": self.action_std.tolist(),
            "obs_mean": self.obs_mean.tolist(),
            "obs_std": self.obs_std.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizationStats":
        return cls(
            action_mean=np.array(d["action_mean"], dtype=np.float64),
            action_std=np.array(d["action_std"], dtype=np.float64),
            obs_mean=np.array(d["obs_mean"], dtype=np.float64),
            obs_std=np.array(d["obs_std"], dtype=np.float64),
        )


def action_matrix(episode: Episode) -> np.ndarray:
    """(n_steps, 4) array of x, y, yaw, pwm_target."""
    return np.array(
        [[s.action.target.x, s.action.target.y, s.action.target.yaw, s.action.pwm_target]
         for s in episode.steps],
        dtype=np.float64,
    )


def obs_feature_matrix(episode: Episode) -> np.ndarray:
    """(n_steps, 4 + k) array of proprio plus the optional feature vector."""
    rows = []
    for s in episode.steps:
        obs = s.observation
        if obs.feature_vec is None:
            rows.append(obs.proprio)
        else:
            rows.append(np.concatenate([obs.proprio, obs.feature_vec]))
    return np.array(rows, dtype=np.float64)


def compute_stats(manifest: DatasetManifest) -> NormalizationStats:
    """Exact two-pass dataset mean and population std per dimension."""
    if len(manifest) == 0:
        raise DataError("cannot compute stats over an empty dataset")
    actions = []
    feats = []
    for episode in manifest.iter_episodes():
        actions.append(action_matrix(episode))
        feats.append(obs_feature_matrix(episode))
    all_actions = np.concatenate(actions, axis=0)
    all_feats = np.concatenate(feats, axis=0)
    return NormalizationStats(
        action_mean=all_actions.mean(axis=0),
        action_std=np.maximum(all_actions.std(axis=0), STD_FLOOR),
        obs_mean=all_feats.mean(axis=0),
        obs_std=np.maximum(all_feats.std(axis=0), STD_FLOOR),
    )

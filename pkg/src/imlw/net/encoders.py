"""Perception encoders: small/large MLPs and a multi-resolution pyramid variant."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data.episode import Observation
from ..data.stats import NormalizationStats
from ..errors import DimensionError
from .autodiff import Tensor, concat
from .params import ParameterSet

ENCODER_VARIANTS = ("enc-small", "enc-large", "enc-pyramid")


@dataclass(frozen=True)
class EncoderConfig:
    variant: str = "enc-small"
    embedding_dim: int = 64
    resolution: int = 16
    lowdim_dim: int = 4  # proprio plus optional feature vector length

    def __post_init__(self):
        if self.variant not in ENCODER_VARIANTS:
            raise ValueError(f"unknown encoder variant: {self.variant}")

    def to_dict(self) -> dict:
        return {"variant": self.variant, "embedding_dim": self.embedding_dim,
                "resolution": self.resolution, "lowdim_dim": self.lowdim_dim}

    @classmethod
    def from_dict(cls, d: dict) -> "EncoderConfig":
        return cls(**d)


def avg_pool(rasters: np.ndarray, factor: int) -> np.ndarray:
    """Average-pool (B, R, R, 3) by an integer factor."""
    if factor == 1:
        return rasters
    b, r, _, c = rasters.shape
    out = r // factor
    return rasters.reshape(b, out, factor, out, factor, c).mean(axis=(2, 4))


def prepare_obs(observations: list[Observation], stats: NormalizationStats | None,
                config: EncoderConfig) -> dict[str, np.ndarray]:
    """Flatten a batch of observations into the arrays the encoder consumes."""
    lowdim = []
    for obs in observations:
        vec = obs.proprio if obs.feature_vec is None else np.concatenate(
            [obs.proprio, obs.feature_vec])
        lowdim.append(vec)
    lowdim = np.array(lowdim, dtype=np.float64)
    if lowdim.shape[1] != config.lowdim_dim:
        raise DimensionError(
            f"low-dimensional input has {lowdim.shape[1]} dims, config expects {config.lowdim_dim}")
    if stats is not None:
        lowdim = stats.normalize_obs_features(lowdim)
    g = np.array([o.global_view for o in observations], dtype=np.float64)
    w = np.array([o.wrist_view for o in observations], dtype=np.float64)
    if g.shape[1] != config.resolution or w.shape[1] != config.resolution:
        raise DimensionError(
            f"raster resolution {g.shape[1]} does not match config {config.resolution}")
    return {"lowdim": lowdim, "global": g, "wrist": w}


def _flat(rasters: np.ndarray) -> np.ndarray:
    return rasters.reshape(rasters.shape[0], -1)


def _linear(x: Tensor, params: ParameterSet, name: str) -> Tensor:
    return x @ params[f"{name}.w"] + params[f"{name}.b"]


def _mlp_input(prepared: dict[str, np.ndarray], config: EncoderConfig) -> np.ndarray:
    quarter = config.resolution // 4
    pooled_g = _flat(avg_pool(prepared["global"], config.resolution // quarter))
    pooled_w = _flat(avg_pool(prepared["wrist"], config.resolution // quarter))
    return np.concatenate([prepared["lowdim"], pooled_g, pooled_w], axis=1)


def _mlp_in_dim(config: EncoderConfig) -> int:
    quarter = config.resolution // 4
    return config.lowdim_dim + 2 * quarter * quarter * 3


def _pyramid_dims(config: EncoderConfig) -> list[int]:
    r = config.resolution
    return [2 * s * s * 3 for s in (r, r // 2, r // 4)]


_PYRAMID_PROJ = 32


def encoder_param_shapes(config: EncoderConfig) -> dict[str, tuple[int, ...]]:
    e = config.embedding_dim
    if config.variant == "enc-small":
        d = _mlp_in_dim(config)
        return {"enc.l0.w": (d, 128), "enc.l0.b": (128,),
                "enc.l1.w": (128, e), "enc.l1.b": (e,)}
    if config.variant == "enc-large":
        d = _mlp_in_dim(config)
        shapes = {"enc.l0.w": (d, 256), "enc.l0.b": (256,)}
        for i in (1, 2):
            shapes[f"enc.l{i}.w"] = (256, 256)
            shapes[f"enc.l{i}.b"] = (256,)
        shapes["enc.l3.w"] = (256, e)
        shapes["enc.l3.b"] = (e,)
        return shapes
    # enc-pyramid: one projection per raster scale plus one for the low-dim input
    shapes = {}
    for i, d in enumerate(_pyramid_dims(config)):
        shapes[f"enc.scale{i}.w"] = (d, _PYRAMID_PROJ)
        shapes[f"enc.scale{i}.b"] = (_PYRAMID_PROJ,)
    shapes["enc.lowdim.w"] = (config.lowdim_dim, _PYRAMID_PROJ)
    shapes["enc.lowdim.b"] = (_PYRAMID_PROJ,)
    shapes["enc.fuse.w"] = (4 * _PYRAMID_PROJ, e)
    shapes["enc.fuse.b"] = (e,)
    return shapes


def encode(prepared: dict[str, np.ndarray], config: EncoderConfig,
           params: ParameterSet) -> Tensor:
    """Embed a prepared observation batch as (B, embedding_dim)."""
    if config.variant in ("enc-small", "enc-large"):
        x = Tensor(_mlp_input(prepared, config))
        n_layers = 2 if config.variant == "enc-small" else 4
        for i in range(n_layers - 1):
            x = _linear(x, params, f"enc.l{i}").tanh()
        return _linear(x, params, f"enc.l{n_layers - 1}")
    # pyramid: pool at three scales, project each, concatenate, fuse
    r = config.resolution
    branches = []
    for i, factor in enumerate((1, 2, 4)):
        pooled = np.concatenate([
            _flat(avg_pool(prepared["global"], factor)),
            _flat(avg_pool(prepared["wrist"], factor)),
        ], axis=1)
        branches.append(_linear(Tensor(pooled), params, f"enc.scale{i}"))
    branches.append(_linear(Tensor(prepared["lowdim"]), params, "enc.lowdim"))
    fused = concat(branches, axis=1).tanh()
    return _linear(fused, params, "enc.fuse")

"""Noise-prediction networks over action windows: temporal-conv and attention variants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError
from .autodiff import Tensor, concat
from .params import ParameterSet

NOISENET_VARIANTS = ("temporal-conv", "attention")

STEP_EMBED_DIM = 32
STEP_EMBED_BASE = 1.0e4


@dataclass(frozen=True)
class NoiseNetConfig:
    variant: str = "temporal-conv"
    hidden_dim: int = 128
    depth: int = 3
    horizon: int = 8
    action_dim: int = 4

    def __post_init__(self):
        if self.variant not in NOISENET_VARIANTS:
            raise ValueError(f"unknown noise-net variant: {self.variant}")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")

    def to_dict(self) -> dict:
        return {"variant": self.variant, "hidden_dim": self.hidden_dim,
                "depth": self.depth, "horizon": self.horizon,
                "action_dim": self.action_dim}

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseNetConfig":
        return cls(**d)


def step_embedding(t: np.ndarray) -> np.ndarray:
    """Sinusoidal diffusion-step embedding, interleaved sin/cos, (B, STEP_EMBED_DIM)."""
    t = np.asarray(t, dtype=np.float64).reshape(-1, 1)
    half = STEP_EMBED_DIM // 2
    freqs = STEP_EMBED_BASE ** (-np.arange(half) / half)
    angles = t * freqs
    emb = np.empty((t.shape[0], STEP_EMBED_DIM))
    emb[:, 0::2] = np.sin(angles)
    emb[:, 1::2] = np.cos(angles)
    return emb


def noisenet_param_shapes(config: NoiseNetConfig, embedding_dim: int) -> dict[str, tuple[int, ...]]:
    h, a = config.hidden_dim, config.action_dim
    cond_in = embedding_dim + STEP_EMBED_DIM
    shapes: dict[str, tuple[int, ...]] = {
        "nn.cond.w": (cond_in, h), "nn.cond.b": (h,),
        "nn.in.w": (a, h), "nn.in.b": (h,),
        "nn.out.w": (h, a), "nn.out.b": (a,),
    }
    if config.variant == "temporal-conv":
        for i in range(config.depth):
            # kernel-3 convolution as three shifted matmuls
            for k in range(3):
                shapes[f"nn.conv{i}.k{k}.w"] = (h, h)
            shapes[f"nn.conv{i}.b"] = (h,)
    else:
        shapes["nn.pos.bias"] = (config.horizon, h)
        for i in range(config.depth):
            for proj in ("q", "k", "v"):
                shapes[f"nn.attn{i}.{proj}.w"] = (h, h)
            shapes[f"nn.attn{i}.mlp0.w"] = (h, h)
            shapes[f"nn.attn{i}.mlp0.b"] = (h,)
            shapes[f"nn.attn{i}.mlp1.w"] = (h, h)
            shapes[f"nn.attn{i}.mlp1.b"] = (h,)
    return shapes


def predict_noise(noisy_actions: np.ndarray | Tensor, diffusion_step: np.ndarray,
                  embedding: Tensor, config: NoiseNetConfig,
                  params: ParameterSet, num_steps: int | None = None) -> Tensor:
    """Predicted noise with the same (B, H, action_dim) shape as the input."""
    x_in = noisy_actions if isinstance(noisy_actions, Tensor) else Tensor(noisy_actions)
    b, h_len, a = x_in.shape
    if h_len != config.horizon or a != config.action_dim:
        raise DimensionError(
            f"noisy_actions shape {x_in.shape} does not match horizon/action_dim "
            f"({config.horizon}, {config.action_dim})")
    steps = np.asarray(diffusion_step)
    if steps.shape != (b,):
        raise DimensionError(f"diffusion_step batch shape {steps.shape} != ({b},)")
    if num_steps is not None and (steps.min() < 1 or steps.max() > num_steps):
        raise DimensionError(f"diffusion step out of range [1, {num_steps}]")
    if embedding.shape[0] != b:
        raise DimensionError(f"embedding batch {embedding.shape[0]} != {b}")

    cond_input = concat([embedding, Tensor(step_embedding(steps))], axis=1)
    cond = (cond_input @ params["nn.cond.w"] + params["nn.cond.b"]).tanh()
    cond3 = cond.reshape(b, 1, config.hidden_dim)

    x = x_in @ params["nn.in.w"] + params["nn.in.b"]
    if config.variant == "temporal-conv":
        for i in range(config.depth):
            padded = x.pad_axis(1, 1, 1)
            y = (padded.slice_axis(1, 0, h_len) @ params[f"nn.conv{i}.k0.w"]
                 + padded.slice_axis(1, 1, h_len + 1) @ params[f"nn.conv{i}.k1.w"]
                 + padded.slice_axis(1, 2, h_len + 2) @ params[f"nn.conv{i}.k2.w"]
                 + params[f"nn.conv{i}.b"])
            x = x + (y + cond3).tanh()
    else:
        x = x + params["nn.pos.bias"] + cond3
        scale = 1.0 / np.sqrt(config.hidden_dim)
        for i in range(config.depth):
            q = x @ params[f"nn.attn{i}.q.w"]
            k = x @ params[f"nn.attn{i}.k.w"]
            v = x @ params[f"nn.attn{i}.v.w"]
            scores = (q @ k.transpose((0, 2, 1))) * scale
            x = x + scores.softmax(axis=-1) @ v
            m = ((x + cond3) @ params[f"nn.attn{i}.mlp0.w"]
                 + params[f"nn.attn{i}.mlp0.b"]).tanh()
            x = x + m @ params[f"nn.attn{i}.mlp1.w"] + params[f"nn.attn{i}.mlp1.b"]
    return x @ params["nn.out.w"] + params["nn.out.b"]

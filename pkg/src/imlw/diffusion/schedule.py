"""DDPM noise schedule and the forward noising marginal."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError


@dataclass(frozen=True)
class DiffusionSchedule:
    betas: np.ndarray            # (T,), each in (0, 1)
    alphas: np.ndarray = field(init=False)
    alpha_bars: np.ndarray = field(init=False)

    def __post_init__(self):
        betas = np.asarray(self.betas, dtype=np.float64)
        if betas.ndim != 1 or betas.size < 1:
            raise ConfigurationError("betas must be a non-empty 1-D array")
        if not np.all((betas > 0.0) & (betas < 1.0)):
            raise ConfigurationError("every beta must lie in (0, 1)")
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "alphas", 1.0 - betas)
        object.__setattr__(self, "alpha_bars", np.cumprod(1.0 - betas))

    @property
    def num_steps(self) -> int:
        return self.betas.size

    def alpha_bar(self, t: int | np.ndarray) -> np.ndarray:
        # t is 1-based
        return self.alpha_bars[np.asarray(t) - 1]

    def to_dict(self) -> dict:
        return {"betas": self.betas.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "DiffusionSchedule":
        return cls(betas=np.array(d["betas"], dtype=np.float64))


def make_schedule(num_steps: int = 50, beta_start: float = 1e-4,
                  beta_end: float = 0.02, kind: str = "linear") -> DiffusionSchedule:
    if num_steps < 1:
        raise ConfigurationError("num_steps must be >= 1")
    if not 0.0 < beta_start <= beta_end < 1.0:
        raise ConfigurationError("need 0 < beta_start <= beta_end < 1")
    if kind != "linear":
        raise ConfigurationError(f"unknown schedule kind: {kind}")
    if num_steps == 1:
        betas = np.array([beta_end])
    else:
        betas = np.linspace(beta_start, beta_end, num_steps)
    return DiffusionSchedule(betas=betas)


def q_sample(x0: np.ndarray, t: int | np.ndarray, eps: np.ndarray,
             schedule: DiffusionSchedule) -> np.ndarray:
    """Forward marginal: sqrt(ab_t) x0 + sqrt(1 - ab_t) eps, elementwise."""
    t_arr = np.asarray(t)
    if np.any(t_arr < 1) or np.any(t_arr > schedule.num_steps):
        raise ConfigurationError(f"diffusion step out of range [1, {schedule.num_steps}]")
    ab = schedule.alpha_bar(t_arr)
    if t_arr.ndim > 0:
        # per-item steps over a batch: broadcast across trailing dims
        ab = ab.reshape((-1,) + (1,) * (x0.ndim - 1))
    return np.sqrt(ab) * x0 + np.sqrt(1.0 - ab) * eps

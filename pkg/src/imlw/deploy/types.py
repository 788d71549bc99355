"""Timestamped actions and the latency model used at deployment time."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data.episode import ActionRecord


@dataclass(frozen=True)
class TimedAction:
    action: ActionRecord
    desired_t: float  # world clock at which the action should apply
    emitted_t: float  # world clock when the policy produced it


@dataclass(frozen=True)
class LatencyModel:
    fixed_delay: float = 0.0
    jitter_std: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.fixed_delay < 0:
            raise ValueError("fixed_delay must be >= 0")
        if self.jitter_std < 0:
            raise ValueError("jitter_std must be >= 0")

    def delays(self, count: int, key: int) -> np.ndarray:
        """Deterministic per-horizon delay draws, truncated at zero."""
        if self.jitter_std == 0.0:
            return np.full(count, self.fixed_delay)
        rng = np.random.default_rng((self.seed, key))
        return np.maximum(self.fixed_delay + rng.normal(0.0, self.jitter_std, size=count), 0.0)

"""DDPM machinery: schedules, noising, loss, sampling, receding-horizon rollout."""

from .policy import (
    BUNDLE_FORMAT,
    PolicyBundle,
    Predictor,
    load_bundle,
    sample_actions,
    save_bundle,
    training_loss,
    training_loss_prepared,
)
from .rollout import RolloutResult, receding_horizon_rollout, tracking_command
from .schedule import DiffusionSchedule, make_schedule, q_sample

__all__ = [
    "BUNDLE_FORMAT", "PolicyBundle", "Predictor", "load_bundle", "sample_actions",
    "save_bundle", "training_loss", "training_loss_prepared",
    "RolloutResult", "receding_horizon_rollout", "tracking_command",
    "DiffusionSchedule", "make_schedule", "q_sample",
]

"""Epoch-based optimization with periodic checkpointing and fine-tuning."""

from .loop import TrainConfig, WindowDataset, epochs_to_threshold, finetune, train
from .optim import Adam
from .registry import (
    CheckpointRecord,
    CheckpointRegistry,
    checkpoint_epochs,
    load_registry,
    save_registry,
)

__all__ = [
    "TrainConfig", "WindowDataset", "epochs_to_threshold", "finetune", "train",
    "Adam", "CheckpointRecord", "CheckpointRegistry", "checkpoint_epochs",
    "load_registry", "save_registry",
]

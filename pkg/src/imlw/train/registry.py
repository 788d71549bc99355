"""Checkpoint records and the per-run registry directory layout."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..diffusion.policy import PolicyBundle, load_bundle, save_bundle
from ..errors import ConfigurationError


@dataclass(frozen=True)
class CheckpointRecord:
    checkpoint_id: str
    epoch: int
    bundle: PolicyBundle
    loss_trace: tuple[float, ...]  # per-epoch mean loss up to this checkpoint
    config_hash: str
    parent_id: str | None = None


@dataclass
class CheckpointRegistry:
    run_id: str
    dataset_id: str
    config: dict
    records: list[CheckpointRecord] = field(default_factory=list)
    loss_trace: list[float] = field(default_factory=list)

    def add(self, record: CheckpointRecord) -> None:
        if any(r.checkpoint_id == record.checkpoint_id for r in self.records):
            raise ConfigurationError(f"duplicate checkpoint id: {record.checkpoint_id}")
        if self.records and record.epoch <= self.records[-1].epoch:
            raise ConfigurationError("checkpoint epochs must be strictly increasing")
        self.records.append(record)

    def latest(self) -> CheckpointRecord:
        return self.records[-1]

    def by_epoch(self, epoch: int) -> CheckpointRecord:
        for r in self.records:
            if r.epoch == epoch:
                return r
        raise KeyError(epoch)


def checkpoint_epochs(epochs: int, every: int) -> list[int]:
    """{k*every : k*every <= epochs} plus the final epoch, sorted."""
    cadence = {k * every for k in range(1, epochs // every + 1)}
    cadence.add(epochs)
    return sorted(cadence)


def save_registry(registry: CheckpointRegistry, runs_root: str | Path) -> Path:
    run_dir = Path(runs_root) / registry.run_id
    run_dir.mkdir(parents=True, exist_ok=True)
    for record in registry.records:
        save_bundle(record.bundle, run_dir / f"ckpt_{record.epoch}.bundle")
    meta = {
        "run_id": registry.run_id,
        "dataset_id": registry.dataset_id,
        "config": registry.config,
        "loss_trace": registry.loss_trace,
        "checkpoints": [
            {"checkpoint_id": r.checkpoint_id, "epoch": r.epoch,
             "config_hash": r.config_hash, "parent_id": r.parent_id}
            for r in registry.records
        ],
    }
    (run_dir / "run.json").write_text(json.dumps(meta, indent=2))
    return run_dir


def load_registry(run_dir: str | Path) -> CheckpointRegistry:
    run_dir = Path(run_dir)
    meta = json.loads((run_dir / "run.json").read_text())
    registry = CheckpointRegistry(
        run_id=meta["run_id"], dataset_id=meta["dataset_id"], config=meta["config"],
        loss_trace=list(meta["loss_trace"]))
    for c in meta["checkpoints"]:
        bundle = load_bundle(run_dir / f"ckpt_{c['epoch']}.bundle")
        registry.add(CheckpointRecord(
            checkpoint_id=c["checkpoint_id"], epoch=c["epoch"], bundle=bundle,
            loss_trace=tuple(registry.loss_trace[:c["epoch"]]),
            config_hash=c["config_hash"], parent_id=c["parent_id"]))
    return registry

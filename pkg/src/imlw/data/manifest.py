"""Dataset manifests: indexing, merge, and collector filtering.

A dataset is a directory holding `manifest.json` plus `episodes/<id>.jsonl`
and `episodes/<id>.blob` pairs.
"""

from __future__ import annotations

import json
import logging
import shutil
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DataError, SchemaError
from .episode import SCHEMA_VERSION, Episode, read_episode, validate_episode, write_episode

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpisodeIndexEntry:
    episode_id: str
    path: str            # relative to the dataset root
    task_name: str
    case_id: str
    collector: str
    length: int
    outcome: bool


@dataclass(frozen=True)
class DatasetManifest:
    dataset_id: str
    root: Path
    task_names: tuple[str, ...]
    episodes: tuple[EpisodeIndexEntry, ...]
    camera_configs: tuple[dict, ...] = ()
    schema_version: str = SCHEMA_VERSION

    def __len__(self) -> int:
        return len(self.episodes)

    def episode_path(self, entry: EpisodeIndexEntry) -> Path:
        return self.root / entry.path

    def load_episode(self, entry: EpisodeIndexEntry) -> Episode:
        return read_episode(self.episode_path(entry))

    def iter_episodes(self):
        for entry in self.episodes:
            yield self.load_episode(entry)


def _entry_to_dict(e: EpisodeIndexEntry) -> dict:
    return {"episode_id": e.episode_id, "path": e.path, "task_name": e.task_name,
            "case_id": e.case_id, "collector": e.collector, "length": e.length,
            "outcome": e.outcome}


def save_manifest(manifest: DatasetManifest) -> Path:
    doc = {
        "schema_version": manifest.schema_version,
        "dataset_id": manifest.dataset_id,
        "task_names": list(manifest.task_names),
        "camera_configs": list(manifest.camera_configs),
        "episodes": [_entry_to_dict(e) for e in manifest.episodes],
    }
    manifest.root.mkdir(parents=True, exist_ok=True)
    path = manifest.root / "manifest.json"
    path.write_text(json.dumps(doc, indent=2))
    return path


def load_manifest(root: str | Path) -> DatasetManifest:
    root = Path(root)
    doc = json.loads((root / "manifest.json").read_text())
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"expected schema {SCHEMA_VERSION}, got {doc.get('schema_version')}")
    ids = [e["episode_id"] for e in doc["episodes"]]
    if len(set(ids)) != len(ids):
        raise DataError("duplicate episode_id in manifest")
    return DatasetManifest(
        dataset_id=doc["dataset_id"],
        root=root,
        task_names=tuple(doc["task_names"]),
        camera_configs=tuple(doc.get("camera_configs", [])),
        episodes=tuple(EpisodeIndexEntry(**e) for e in doc["episodes"]),
    )


class DatasetWriter:
    """Single-writer assembly of a dataset directory."""

    def __init__(self, root: str | Path, dataset_id: str, camera_configs: tuple[dict, ...] = ()):
        self.root = Path(root)
        self.dataset_id = dataset_id
        self.camera_configs = tuple(camera_configs)
        self._entries: list[EpisodeIndexEntry] = []
        self._tasks: list[str] = []
        (self.root / "episodes").mkdir(parents=True, exist_ok=True)

    def add(self, episode: Episode) -> None:
        violations = validate_episode(episode)
        if violations:
            raise DataError(f"episode {episode.episode_id} invalid: {violations}")
        if any(e.episode_id == episode.episode_id for e in self._entries):
            raise DataError(f"duplicate episode_id: {episode.episode_id}")
        write_episode(episode, self.root / "episodes")
        self._entries.append(EpisodeIndexEntry(
            episode_id=episode.episode_id,
            path=f"episodes/{episode.episode_id}.jsonl",
            task_name=episode.task_name,
            case_id=episode.case_id,
            collector=episode.collector,
            length=len(episode.steps),
            outcome=episode.outcome,
        ))
        if episode.task_name not in self._tasks:
            self._tasks.append(episode.task_name)

    def finalize(self) -> DatasetManifest:
        manifest = DatasetManifest(
            dataset_id=self.dataset_id,
            root=self.root,
            task_names=tuple(self._tasks),
            camera_configs=self.camera_configs,
            episodes=tuple(self._entries),
        )
        save_manifest(manifest)
        return manifest


def merge_datasets(a: DatasetManifest, b: DatasetManifest,
                   out_root: str | Path, dataset_id: str | None = None) -> DatasetManifest:
    """Union of two datasets into a fresh directory; id collisions are rejected."""
    if a.schema_version != b.schema_version:
        raise DataError("schema_version mismatch")
    if a.camera_configs and b.camera_configs and a.camera_configs != b.camera_configs:
        raise DataError("camera-config mismatch between datasets")
    ids_a = {e.episode_id for e in a.episodes}
    collisions = ids_a & {e.episode_id for e in b.episodes}
    if collisions:
        raise DataError(f"episode_id collision: {sorted(collisions)[:5]}")

    out_root = Path(out_root)
    (out_root / "episodes").mkdir(parents=True, exist_ok=True)
    entries = []
    for src in (a, b):
        for entry in src.episodes:
            for suffix in (".jsonl", ".blob"):
                shutil.copyfile(
                    src.episode_path(entry).with_suffix(suffix),
                    out_root / "episodes" / f"{entry.episode_id}{suffix}")
            entries.append(EpisodeIndexEntry(
                episode_id=entry.episode_id,
                path=f"episodes/{entry.episode_id}.jsonl",
                task_name=entry.task_name,
                case_id=entry.case_id,
                collector=entry.collector,
                length=entry.length,
                outcome=entry.outcome,
            ))
    task_names = list(a.task_names) + [t for t in b.task_names if t not in a.task_names]
    merged = DatasetManifest(
        dataset_id=dataset_id or f"{a.dataset_id}+{b.dataset_id}",
        root=out_root,
        task_names=tuple(task_names),
        camera_configs=a.camera_configs or b.camera_configs,
        episodes=tuple(entries),
    )
    save_manifest(merged)
    return merged


def filter_by_collector(manifest: DatasetManifest, tag: str) -> DatasetManifest:
    """Restrict a manifest to one collector's episodes (in place of re-copying files)."""
    kept = tuple(e for e in manifest.episodes if e.collector == tag)
    if not kept:
        log.warning("filter_by_collector: no episodes for tag %r", tag)
    return DatasetManifest(
        dataset_id=f"{manifest.dataset_id}[{tag}]",
        root=manifest.root,
        task_names=manifest.task_names,
        camera_configs=manifest.camera_configs,
        episodes=kept,
    )

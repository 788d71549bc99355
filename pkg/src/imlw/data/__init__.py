"""Episode container format, dataset manifests, merge, and normalization stats."""

from .episode import (
    SCHEMA_VERSION,
    ActionRecord,
    Episode,
    Observation,
    StepRecord,
    episodes_equal,
    read_episode,
    validate_episode,
    write_episode,
)
from .manifest import (
    DatasetManifest,
    DatasetWriter,
    EpisodeIndexEntry,
    filter_by_collector,
    load_manifest,
    merge_datasets,
    save_manifest,
)
from .stats import (
    STD_FLOOR,
    NormalizationStats,
    action_matrix,
    compute_stats,
    obs_feature_matrix,
)

__all__ = [
    "SCHEMA_VERSION", "ActionRecord", "Episode", "Observation", "StepRecord",
    "episodes_equal", "read_episode", "validate_episode", "write_episode",
    "DatasetManifest", "DatasetWriter", "EpisodeIndexEntry", "filter_by_collector",
    "load_manifest", "merge_datasets", "save_manifest",
    "STD_FLOOR", "NormalizationStats", "action_matrix", "compute_stats",
    "obs_feature_matrix",
]

"""Episode format, manifests, merge/filter, and normalization statistics."""

import json

import numpy as np
import pytest

from imlw.data.episode import (
    Episode,
    episodes_equal,
    read_episode,
    validate_episode,
    write_episode,
)
from imlw.data.manifest import (
    DatasetWriter,
    filter_by_collector,
    load_manifest,
    merge_datasets,
)
from imlw.data.stats import action_matrix, compute_stats, obs_feature_matrix
from imlw.errors import DataError, SchemaError, TruncatedPayloadError
from imlw.sim.types import DT

from conftest import make_episode


class TestEpisodeRoundTrip:
    def test_bit_exact(self, rng, tmp_path):
        ep = make_episode(rng, n_steps=5, feat=7)
        path = write_episode(ep, tmp_path)
        back = read_episode(path)
        assert episodes_equal(ep, back)
        # rasters must round-trip bit for bit, not approximately
        assert back.steps[0].observation.global_view.dtype == np.float32
        np.testing.assert_array_equal(back.steps[2].observation.wrist_view,
                                      ep.steps[2].observation.wrist_view)

    def test_without_features(self, rng, tmp_path):
        ep = make_episode(rng, feat=None)
        back = read_episode(write_episode(ep, tmp_path))
        assert back.steps[0].observation.feature_vec is None
        assert episodes_equal(ep, back)

    def test_schema_version_checked(self, rng, tmp_path):
        path = write_episode(make_episode(rng), tmp_path)
        lines = path.read_text().splitlines()
        header = json.loads(lines[0])
        header["schema_version"] = "iml-v0"
        path.write_text("\n".join([json.dumps(header)] + lines[1:]) + "\n")
        with pytest.raises(SchemaError):
            read_episode(path)

    def test_truncated_jsonl_detected(self, rng, tmp_path):
        path = write_episode(make_episode(rng, n_steps=4), tmp_path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-1]) + "\n")  # drop the last step
        with pytest.raises(TruncatedPayloadError):
            read_episode(path)

    def test_truncated_blob_detected(self, rng, tmp_path):
        path = write_episode(make_episode(rng, n_steps=2), tmp_path)
        blob = path.with_suffix(".blob")
        blob.write_bytes(blob.read_bytes()[:-100])
        with pytest.raises(TruncatedPayloadError):
            read_episode(path)


class TestValidation:
    def test_valid_episode(self, rng):
        assert validate_episode(make_episode(rng)) == []

    def test_violations_reported(self, rng):
        ep = make_episode(rng, n_steps=3)
        bad_steps = (ep.steps[0],
                     ep.steps[1].__class__(t=ep.steps[0].t, observation=ep.steps[1].observation,
                                           action=ep.steps[1].action),
                     ep.steps[2])
        bad = Episode(**{**ep.__dict__, "steps": bad_steps})
        assert any("non-monotone" in v for v in validate_episode(bad))
        empty = Episode(**{**ep.__dict__, "steps": ()})
        assert any("no steps" in v for v in validate_episode(empty))
        wrong_dt = Episode(**{**ep.__dict__, "control_dt": DT * 2})
        assert any("control_dt" in v for v in validate_episode(wrong_dt))


class TestManifest:
    def _dataset(self, rng, root, n=4, collectors=("alice", "bob")):
        w = DatasetWriter(root, "ds")
        for i in range(n):
            w.add(make_episode(rng, episode_id=f"ep{i}",
                               collector=collectors[i % len(collectors)]))
        return w.finalize()

    def test_write_load(self, rng, tmp_path):
        m = self._dataset(rng, tmp_path / "d")
        loaded = load_manifest(tmp_path / "d")
        assert loaded.dataset_id == "ds"
        assert len(loaded) == 4
        assert episodes_equal(loaded.load_episode(loaded.episodes[0]),
                              m.load_episode(m.episodes[0]))

    def test_writer_rejects_invalid_and_duplicate(self, rng, tmp_path):
        w = DatasetWriter(tmp_path / "d", "ds")
        ep = make_episode(rng)
        w.add(ep)
        with pytest.raises(DataError):
            w.add(ep)  # duplicate id
        bad = Episode(**{**make_episode(rng, episode_id="bad").__dict__, "steps": ()})
        with pytest.raises(DataError):
            w.add(bad)

    def test_merge_cardinality_and_collision(self, rng, tmp_path):
        a = self._dataset(rng, tmp_path / "a", n=3)
        w = DatasetWriter(tmp_path / "b", "other")
        for i in range(2):
            w.add(make_episode(rng, episode_id=f"other{i}"))
        b = w.finalize()
        merged = merge_datasets(a, b, tmp_path / "m")
        assert len(merged) == len(a) + len(b)
        # merged episodes are real copies readable from the new root
        for entry in merged.episodes:
            merged.load_episode(entry)
        with pytest.raises(DataError):
            merge_datasets(a, a, tmp_path / "m2")

    def test_filter_by_collector(self, rng, tmp_path):
        m = self._dataset(rng, tmp_path / "d", n=5, collectors=("alice", "bob"))
        alice = filter_by_collector(m, "alice")
        assert len(alice) == 3
        assert all(e.collector == "alice" for e in alice.episodes)
        assert len(filter_by_collector(m, "nobody")) == 0


class TestStats:
    def test_matches_numpy_oracle(self, rng, tmp_path):
        w = DatasetWriter(tmp_path / "d", "ds")
        eps = [make_episode(rng, episode_id=f"ep{i}", n_steps=4, feat=6) for i in range(3)]
        for ep in eps:
            w.add(ep)
        stats = compute_stats(w.finalize())
        all_actions = np.concatenate([action_matrix(e) for e in eps])
        all_feats = np.concatenate([obs_feature_matrix(e) for e in eps])
        np.testing.assert_allclose(stats.action_mean, all_actions.mean(axis=0), atol=1e-12)
        np.testing.assert_allclose(stats.action_std, all_actions.std(axis=0), atol=1e-12)
        np.testing.assert_allclose(stats.obs_mean, all_feats.mean(axis=0), atol=1e-12)

    def test_round_trip_and_floor(self, rng):
        from conftest import identity_stats
        stats = identity_stats(6)
        x = rng.normal(size=(10, 4))
        np.testing.assert_allclose(stats.denormalize_actions(stats.normalize_actions(x)),
                                   x, atol=1e-12)
        # serialization round-trip
        from imlw.data.stats import NormalizationStats
        back = NormalizationStats.from_dict(stats.to_dict())
        np.testing.assert_array_equal(back.action_mean, stats.action_mean)

    def test_constant_dimension_floored(self, rng, tmp_path):
        w = DatasetWriter(tmp_path / "d", "ds")
        ep = make_episode(rng, n_steps=3)
        # pwm_target identical across steps -> zero variance dimension
        const_steps = tuple(
            s.__class__(t=s.t, observation=s.observation,
                        action=s.action.__class__(target=s.action.target, pwm_target=0.5))
            for s in ep.steps)
        w.add(Episode(**{**ep.__dict__, "steps": const_steps}))
        stats = compute_stats(w.finalize())
        assert stats.action_std[3] == pytest.approx(1e-6)

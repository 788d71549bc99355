"""Parameter sets, encoders, noise networks: shapes, determinism, serialization."""

import numpy as np
import pytest

from imlw.data.stats import NormalizationStats
from imlw.errors import DimensionError, SchemaError, TruncatedPayloadError
from imlw.net import init_params
from imlw.net.encoders import EncoderConfig, avg_pool, encode, encoder_param_shapes, prepare_obs
from imlw.net.noisenets import (
    STEP_EMBED_DIM,
    NoiseNetConfig,
    noisenet_param_shapes,
    predict_noise,
    step_embedding,
)
from imlw.net.params import (
    ParameterSet,
    config_hash,
    gradients,
    load_params,
    params_from_bytes,
    params_to_bytes,
    save_params,
)

from conftest import identity_stats, make_observation


class TestParameterSet:
    def test_copy_is_deep(self, rng):
        p = ParameterSet({"w": rng.normal(size=(2, 2))})
        q = p.copy()
        q["w"].value[0, 0] = 99.0
        assert p["w"].value[0, 0] != 99.0

    def test_load_values_shape_check(self, rng):
        p = ParameterSet({"w": rng.normal(size=(2, 2))})
        with pytest.raises(DimensionError):
            p.load_values({"w": np.zeros((3, 3))})

    def test_off_graph_gradient_is_zero(self, rng):
        p = ParameterSet({"used": rng.normal(size=(3,)), "unused": rng.normal(size=(2,))})
        loss = (p["used"] * p["used"]).sum()
        grads = gradients(loss, p)
        np.testing.assert_allclose(grads["used"], 2 * p["used"].value)
        np.testing.assert_array_equal(grads["unused"], np.zeros(2))

    def test_serialization_round_trip(self, rng, tmp_path):
        p = ParameterSet({"a.w": rng.normal(size=(3, 4)), "a.b": rng.normal(size=(4,))})
        save_params(p, tmp_path / "p.bin", cfg_hash="abc")
        q, h = load_params(tmp_path / "p.bin")
        assert h == "abc"
        assert q.names() == p.names()
        for name in p:
            np.testing.assert_array_equal(q[name].value, p[name].value)

    def test_truncation_and_format_detected(self, rng):
        raw = params_to_bytes(ParameterSet({"w": rng.normal(size=(8,))}))
        with pytest.raises(TruncatedPayloadError):
            params_from_bytes(raw[:4])
        with pytest.raises(SchemaError):
            params_from_bytes(raw.replace(b"imlw-params-v1", b"imlw-params-v9"))

    def test_config_hash_stable_and_order_free(self):
        assert config_hash({"a": 1, "b": 2}) == config_hash({"b": 2, "a": 1})
        assert config_hash({"a": 1}) != config_hash({"a": 2})


class TestInit:
    def test_deterministic_and_output_head_zeroed(self):
        enc = EncoderConfig(variant="enc-small", embedding_dim=8)
        nn = NoiseNetConfig(variant="temporal-conv", hidden_dim=8, depth=1)
        a = init_params(enc, nn, seed=3)
        b = init_params(enc, nn, seed=3)
        c = init_params(enc, nn, seed=4)
        for name in a:
            np.testing.assert_array_equal(a[name].value, b[name].value)
        assert any(not np.array_equal(a[n].value, c[n].value) for n in a)
        # zero-initialized output head: the untrained net predicts zero noise
        np.testing.assert_array_equal(a["nn.out.w"].value, 0.0)
        np.testing.assert_array_equal(a["nn.out.b"].value, 0.0)


class TestEncoders:
    def test_avg_pool_oracle(self, rng):
        x = rng.normal(size=(2, 4, 4, 3))
        pooled = avg_pool(x, 2)
        assert pooled.shape == (2, 2, 2, 3)
        np.testing.assert_allclose(pooled[0, 0, 0], x[0, :2, :2].mean(axis=(0, 1)))

    def test_prepare_obs_normalizes(self, rng):
        obs = [make_observation(rng, feat=4) for _ in range(3)]
        stats = NormalizationStats(
            action_mean=np.zeros(4), action_std=np.ones(4),
            obs_mean=np.full(8, 0.5), obs_std=np.full(8, 2.0))
        prepared = prepare_obs(obs, stats, EncoderConfig(lowdim_dim=8))
        raw = np.concatenate([obs[0].proprio, obs[0].feature_vec])
        np.testing.assert_allclose(prepared["lowdim"][0], (raw - 0.5) / 2.0)

    def test_prepare_obs_dimension_checks(self, rng):
        obs = [make_observation(rng, feat=4)]
        with pytest.raises(DimensionError):
            prepare_obs(obs, None, EncoderConfig(lowdim_dim=4))
        obs24 = [make_observation(rng, res=24, feat=4)]
        with pytest.raises(DimensionError):
            prepare_obs(obs24, None, EncoderConfig(lowdim_dim=8, resolution=16))

    @pytest.mark.parametrize("variant", ["enc-small", "enc-large", "enc-pyramid"])
    def test_encode_shape_and_determinism(self, rng, variant):
        cfg = EncoderConfig(variant=variant, embedding_dim=16, lowdim_dim=4)
        params = ParameterSet({n: rng.normal(size=s, scale=0.1)
                               for n, s in encoder_param_shapes(cfg).items()})
        obs = [make_observation(rng) for _ in range(5)]
        prepared = prepare_obs(obs, None, cfg)
        a = encode(prepared, cfg, params)
        b = encode(prepared, cfg, params)
        assert a.shape == (5, 16)
        np.testing.assert_array_equal(a.value, b.value)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            EncoderConfig(variant="enc-huge")


class TestNoiseNets:
    def test_step_embedding_structure(self):
        emb = step_embedding(np.array([0.0]))
        # sin(0)=0 at even slots, cos(0)=1 at odd slots
        np.testing.assert_allclose(emb[0, 0::2], 0.0, atol=1e-12)
        np.testing.assert_allclose(emb[0, 1::2], 1.0, atol=1e-12)
        assert emb.shape == (1, STEP_EMBED_DIM)
        a, b = step_embedding(np.array([3.0])), step_embedding(np.array([4.0]))
        assert not np.allclose(a, b)

    @pytest.mark.parametrize("variant", ["temporal-conv", "attention"])
    def test_predict_noise_shape(self, rng, variant):
        from imlw.net.autodiff import Tensor
        cfg = NoiseNetConfig(variant=variant, hidden_dim=8, depth=2, horizon=4, action_dim=3)
        params = ParameterSet({n: rng.normal(size=s, scale=0.1)
                               for n, s in noisenet_param_shapes(cfg, 6).items()})
        emb = Tensor(rng.normal(size=(2, 6)))
        out = predict_noise(rng.normal(size=(2, 4, 3)), np.array([1, 5]), emb, cfg, params,
                            num_steps=10)
        assert out.shape == (2, 4, 3)

    def test_predict_noise_validates(self, rng):
        from imlw.net.autodiff import Tensor
        cfg = NoiseNetConfig(hidden_dim=8, depth=1, horizon=4, action_dim=3)
        params = ParameterSet({n: rng.normal(size=s, scale=0.1)
                               for n, s in noisenet_param_shapes(cfg, 6).items()})
        emb = Tensor(rng.normal(size=(2, 6)))
        with pytest.raises(DimensionError):
            predict_noise(rng.normal(size=(2, 5, 3)), np.array([1, 1]), emb, cfg, params)
        with pytest.raises(DimensionError):
            predict_noise(rng.normal(size=(2, 4, 3)), np.array([1]), emb, cfg, params)
        with pytest.raises(DimensionError):
            predict_noise(rng.normal(size=(2, 4, 3)), np.array([1, 99]), emb, cfg, params,
                          num_steps=10)

    def test_conv_is_translation_sensitive_but_local(self, rng):
        # moving the distinctive action to a different position moves the response
        cfg = NoiseNetConfig(variant="temporal-conv", hidden_dim=8, depth=1,
                             horizon=6, action_dim=2)
        from imlw.net.autodiff import Tensor
        params = ParameterSet({n: rng.normal(size=s, scale=0.3)
                               for n, s in noisenet_param_shapes(cfg, 4).items()})
        emb = Tensor(np.zeros((1, 4)))
        base = np.zeros((1, 6, 2))
        spike = base.copy()
        spike[0, 0] = 5.0
        out_base = predict_noise(base, np.array([1]), emb, cfg, params, num_steps=5).value
        out_spike = predict_noise(spike, np.array([1]), emb, cfg, params, num_steps=5).value
        # a kernel-3 conv with depth 1 has a receptive field of 3: position 5 unaffected
        delta = np.abs(out_spike - out_base).sum(axis=2)[0]
        assert delta[0] > 1e-6
        assert delta[5] < 1e-12

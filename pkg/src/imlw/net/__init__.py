"""Numeric core: autodiff tensors, parameter sets, encoders, noise networks."""

from __future__ import annotations

import numpy as np

from .autodiff import Tensor, concat, constant
from .encoders import (
    ENCODER_VARIANTS,
    EncoderConfig,
    avg_pool,
    encode,
    encoder_param_shapes,
    prepare_obs,
)
from .noisenets import (
    NOISENET_VARIANTS,
    STEP_EMBED_DIM,
    NoiseNetConfig,
    noisenet_param_shapes,
    predict_noise,
    step_embedding,
)
from .params import (
    PARAMS_FORMAT,
    ParameterSet,
    config_hash,
    fan_in_init,
    gradients,
    load_params,
    save_params,
)


def init_params(encoder_config: EncoderConfig, noisenet_config: NoiseNetConfig,
                seed: int) -> ParameterSet:
    """Fan-in-scaled uniform initialization; output head zeroed; deterministic per seed."""
    rng = np.random.default_rng(seed)
    shapes = dict(encoder_param_shapes(encoder_config))
    shapes.update(noisenet_param_shapes(noisenet_config, encoder_config.embedding_dim))
    arrays = {}
    for name, shape in shapes.items():
        zero = name.startswith("nn.out.")
        arrays[name] = fan_in_init(rng, shape, zero=zero)
    return ParameterSet(arrays)


__all__ = [
    "Tensor", "concat", "constant",
    "ENCODER_VARIANTS", "EncoderConfig", "avg_pool", "encode",
    "encoder_param_shapes", "prepare_obs",
    "NOISENET_VARIANTS", "STEP_EMBED_DIM", "NoiseNetConfig",
    "noisenet_param_shapes", "predict_noise", "step_embedding",
    "PARAMS_FORMAT", "ParameterSet", "config_hash", "fan_in_init", "gradients",
    "load_params", "save_params", "init_params",
]

"""Shared fixtures: tiny tasks, synthetic episodes, and stub policy bundles."""

from __future__ import annotations

import numpy as np
import pytest

from imlw.data.episode import ActionRecord, Episode, Observation, StepRecord
from imlw.data.stats import NormalizationStats
from imlw.diffusion.policy import PolicyBundle
from imlw.diffusion.schedule import make_schedule
from imlw.net import init_params
from imlw.net.encoders import EncoderConfig
from imlw.net.noisenets import NoiseNetConfig
from imlw.obs import DEFAULT_CAMERAS, feature_dim
from imlw.sim.tasks import get_task
from imlw.sim.types import DT, CaseSetup, Pose2, TaskSpec


def make_task(name="tiny", n_cases=2, max_rollout_time=1.0, jitter=0.0) -> TaskSpec:
    """Single-object pick-and-place task with a short rollout budget."""
    cases = tuple(
        CaseSetup(
            case_id=f"c{i}",
            object_placements=((0.3 + 0.1 * i, 0.6, 0.04, 0, 0),),
            receptacle_placements=((0.5, 0.3, 0.06),),
            rng_jitter=jitter,
        )
        for i in range(n_cases)
    )
    return TaskSpec(name=name, object_count=1, receptacle_count=1, cases=cases,
                    uses_color=False, uses_size=False, uses_shape=False,
                    logic_steps=1, success_rule="pick_place",
                    max_rollout_time=max_rollout_time)


def identity_stats(obs_dim: int) -> NormalizationStats:
    return NormalizationStats(
        action_mean=np.zeros(4), action_std=np.ones(4),
        obs_mean=np.zeros(obs_dim), obs_std=np.ones(obs_dim))


def make_observation(rng: np.random.Generator, res=16, feat=None) -> Observation:
    return Observation(
        proprio=rng.uniform(0, 1, size=4),
        global_view=rng.uniform(0, 1, size=(res, res, 3)).astype(np.float32),
        wrist_view=rng.uniform(0, 1, size=(res, res, 3)).astype(np.float32),
        feature_vec=None if feat is None else rng.uniform(0, 1, size=feat))


def make_episode(rng: np.random.Generator, episode_id="ep0", n_steps=3,
                 res=16, feat=None, collector="alice", task_name="tiny",
                 case_id="c0") -> Episode:
    steps = tuple(
        StepRecord(
            t=i * DT,
            observation=make_observation(rng, res=res, feat=feat),
            action=ActionRecord(
                target=Pose2(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(-3, 3)),
                pwm_target=rng.uniform(0, 1)),
        )
        for i in range(n_steps)
    )
    return Episode(episode_id=episode_id, task_name=task_name, case_id=case_id,
                   collector=collector, created_at="sim+0s", control_dt=DT,
                   camera_configs=DEFAULT_CAMERAS, steps=steps, outcome=True)


def make_stub_bundle(task: TaskSpec | None = None, num_steps=5,
                     execute_steps=4) -> PolicyBundle:
    """Bundle whose network is never used: pair it with a stub predictor."""
    fd = 8 if task is None else feature_dim(task)
    enc = EncoderConfig(variant="enc-small", embedding_dim=8, lowdim_dim=4 + fd)
    nn = NoiseNetConfig(variant="temporal-conv", hidden_dim=8, depth=1)
    return PolicyBundle(
        encoder_config=enc, noisenet_config=nn,
        params=init_params(enc, nn, seed=0),
        schedule=make_schedule(num_steps=num_steps),
        stats=identity_stats(4 + fd),
        execute_steps=execute_steps,
    )


def scripted_plan_predictor(task: TaskSpec, bundle: PolicyBundle, seed=0):
    """Predictor that steers the final denoising step onto an expert trajectory.

    Returns zeros until t=1, then the exact inversion that lands the reverse
    update on the next window of a precomputed expert plan.
    """
    from imlw.expert.collect import run_demonstration
    from imlw.expert.profiles import BUILTIN_PROFILES

    steps, _, ok = run_demonstration(task, task.cases[0],
                                     BUILTIN_PROFILES["expertA"], seed=seed)
    assert ok
    plan = np.array([[s.action.target.x, s.action.target.y, s.action.target.yaw,
                      s.action.pwm_target] for s in steps])
    sched = bundle.schedule
    state = {"cursor": 0}

    def scripted(x_t, t):
        if t[0] > 1:
            return np.zeros_like(x_t)
        i = state["cursor"]
        window = np.zeros((bundle.horizon, 4))
        for k in range(bundle.horizon):
            window[k] = plan[min(i + k, len(plan) - 1)]
        state["cursor"] = i + bundle.execute_steps
        beta, alpha, ab = sched.betas[0], sched.alphas[0], sched.alpha_bars[0]
        return (x_t - np.sqrt(alpha) * window[None]) * np.sqrt(1 - ab) / beta

    return scripted


def nan_predictor(x_t, t):
    """Stub that makes every reverse chain diverge immediately."""
    return np.full_like(x_t, np.nan)


def zero_predictor(x_t, t):
    return np.zeros_like(x_t)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def tiny_task():
    return make_task()


@pytest.fixture
def pick_place_task():
    return get_task("pick_place")

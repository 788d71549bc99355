"""Collect scripted demonstrations and train a small diffusion policy.

Uses a deliberately tiny configuration so the whole script runs in about a
minute; see demos/03_evaluate_and_deploy.py for what to do with the result.
"""

import tempfile
from pathlib import Path

from imlw.expert.collect import collect
from imlw.expert.profiles import BUILTIN_PROFILES
from imlw.net.encoders import EncoderConfig
from imlw.net.noisenets import NoiseNetConfig
from imlw.sim.tasks import get_task
from imlw.train.loop import TrainConfig, train
from imlw.train.registry import save_registry

WORKDIR = Path(tempfile.gettempdir()) / "imlw-demo"


def main():
    task = get_task("pick_place")

    # two experts of different proficiency, same cases
    perfect = BUILTIN_PROFILES["expertA"]
    shaky = BUILTIN_PROFILES["expertB"]
    data = collect(task, list(task.cases), episodes_per_case=2, profile=perfect,
                   seed=0, out_root=WORKDIR / "data")
    print(f"collected {len(data)} episodes from {perfect.name} "
          f"into {data.root}")
    lengths = [e.length for e in data.episodes]
    print(f"episode lengths: min {min(lengths)}, max {max(lengths)} ticks")
    print(f"(a {shaky.name} profile would wobble: tremor={shaky.tremor_std}, "
          f"pauses={shaky.pause_prob})")

    config = TrainConfig(epochs=10, batch_size=64, checkpoint_every=5, seed=0)
    registry = train(data,
                     EncoderConfig(variant="enc-small"),
                     NoiseNetConfig(variant="temporal-conv"),
                     config)
    print(f"\ntrained run {registry.run_id}")
    print(f"loss trace: {['%.3f' % v for v in registry.loss_trace]}")
    run_dir = save_registry(registry, WORKDIR / "runs")
    print(f"checkpoints at epochs {[r.epoch for r in registry.records]} -> {run_dir}")


if __name__ == "__main__":
    main()

"""Sweep checkpoints under the voting protocol, then deploy with latency.

Runs demos/02_collect_and_train.py's output if present, otherwise trains a
fresh tiny run first. Evaluation uses unanimous votes over cases x repeats;
deployment gates every action on a timestamp deadline.
"""

import tempfile
from pathlib import Path

import numpy as np

from imlw.deploy.stream import execute_stream
from imlw.deploy.types import LatencyModel
from imlw.evaluation.evaluators import default_evaluators
from imlw.evaluation.sweep import sweep
from imlw.evaluation.vpr import vpr
from imlw.sim.tasks import get_task
from imlw.sim.world import world_init
from imlw.train.registry import load_registry

WORKDIR = Path(tempfile.gettempdir()) / "imlw-demo"


def ensure_run():
    runs = WORKDIR / "runs"
    if runs.exists():
        run_dirs = sorted(runs.iterdir())
        if run_dirs:
            return load_registry(run_dirs[0])
    print("no trained run found; running demo 02 first...")
    import importlib
    importlib.import_module("demos.02_collect_and_train")  # pragma: no cover


def main():
    registry = ensure_run()
    task = get_task("pick_place")

    best, table = sweep(registry, task, evaluators=default_evaluators(4), repeats=2)
    print("checkpoint sweep (shared trial seeds across checkpoints):")
    for row in table:
        marker = "  <- best" if row["epoch"] == best.epoch else ""
        print(f"  epoch {row['epoch']:>3}: VPR {row['vpr']:.2f}{marker}")

    report = vpr(task, best.bundle, default_evaluators(4), repeats=2)
    print(f"\nbest checkpoint over {len(report.trials)} trials: VPR {report.vpr:.2f}")
    worst = min(report.per_case, key=report.per_case.get)
    print(f"hardest case: {worst} at {report.per_case[worst]:.2f}")

    print("\ndeploying with 90 ms fixed latency + 40 ms jitter:")
    world = world_init(task, task.cases[0], seed=0)
    latency = LatencyModel(fixed_delay=0.09, jitter_std=0.04, seed=0)
    world, log, termination = execute_stream(best.bundle, world, task, latency,
                                             rng=np.random.default_rng(0))
    print(f"  termination={termination} after {world.tick_index} ticks; "
          f"{log.executed_count()} actions executed, "
          f"{log.discarded_count()} discarded as late")


if __name__ == "__main__":
    main()

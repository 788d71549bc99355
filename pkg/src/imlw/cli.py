"""Command-line entry point: collect, serve, train, finetune, sweep, eval,
deploy-sim, merge, stats, report.

Exit codes: 0 success, 1 usage, 2 data/validation failure, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import os
import sys
from pathlib import Path

from .data.manifest import load_manifest, merge_datasets
from .data.stats import compute_stats
from .deploy.stream import DEFAULT_SLACK, execute_stream
from .deploy.types import LatencyModel
from .diffusion.policy import load_bundle
from .errors import ConfigurationError, DataError, NumericError, SchemaError, StallError
from .evaluation.evaluators import default_evaluators
from .evaluation.report import RunSummary, comparison_table, render_json, render_text
from .evaluation.sweep import sweep as run_sweep
from .evaluation.vpr import DEFAULT_REPEATS, vpr
from .expert.collect import collect as run_collect
from .expert.profiles import BUILTIN_PROFILES, ProficiencyProfile
from .net.encoders import EncoderConfig
from .net.noisenets import NoiseNetConfig
from .sim.types import TaskSpec
from .sim.tasks import builtin_tasks, get_task, load_task_library
from .sim.world import success, world_init
from .train.loop import TrainConfig, finetune as run_finetune, train as run_train
from .train.registry import load_registry, save_registry

log = logging.getLogger("imlw")

RUNCONFIG_SCHEMA = "iml-runconfig-v1"
EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_seed() -> int:
    return int(os.environ.get("IMLW_SEED", "0"))


def _load_tasks(path: str | None) -> list[TaskSpec]:
    if path is None:
        return builtin_tasks()
    tasks, _ = load_task_library(path)
    return tasks


def _resolve_task(name: str, library: str | None) -> TaskSpec:
    for task in _load_tasks(library):
        if task.name == name:
            return task
    raise DataError(f"unknown task: {name}")


def _resolve_profile(name: str, library: str | None) -> ProficiencyProfile:
    if name in BUILTIN_PROFILES:
        return BUILTIN_PROFILES[name]
    if library is not None:
        _, profiles = load_task_library(library)
        for p in profiles:
            if p.get("name") == name:
                return ProficiencyProfile.from_dict(p)
    raise DataError(f"unknown profile: {name}")


def _arch_label(registry_config: dict) -> str:
    policy = registry_config.get("policy", {})
    return f"{policy.get('encoder', {}).get('variant', '?')}/" \
           f"{policy.get('noisenet', {}).get('variant', '?')}"


# --- subcommand implementations ----------------------------------------------

def _cmd_collect(args) -> int:
    task = _resolve_task(args.task, args.tasks)
    cases = task.cases if args.cases == "all" else tuple(
        task.case(cid) for cid in args.cases.split(","))
    profile = _resolve_profile(args.profile, args.tasks)
    manifest = run_collect(task, list(cases), args.per_case, profile,
                           args.seed, args.out)
    log.info("collected %d episodes into %s", len(manifest), manifest.root)
    print(str(manifest.root / "manifest.json"))
    return EXIT_OK


def _cmd_serve(args) -> int:
    from .gateway.server import serve

    tasks = _load_tasks(args.tasks)

    async def _run():
        server = await serve(tasks, args.out, port=args.port, seed=args.seed,
                             lockstep=args.lockstep)
        await server.wait_closed()

    asyncio.run(_run())
    return EXIT_OK


def _train_config(args) -> TrainConfig:
    return TrainConfig(epochs=args.epochs, batch_size=args.batch_size,
                       learning_rate=args.lr, checkpoint_every=args.ckpt_every,
                       seed=args.seed)


def _cmd_train(args) -> int:
    manifest = load_manifest(args.data)
    registry = run_train(manifest,
                         EncoderConfig(variant=args.encoder),
                         NoiseNetConfig(variant=args.noisenet),
                         _train_config(args), run_id=args.run_id)
    run_dir = save_registry(registry, args.out)
    log.info("run %s: %d checkpoints in %s", registry.run_id,
             len(registry.records), run_dir)
    print(str(run_dir))
    return EXIT_OK


def _cmd_finetune(args) -> int:
    manifest = load_manifest(args.data)
    base_registry = load_registry(getattr(args, "from"))
    base = (base_registry.by_epoch(args.epoch) if args.epoch is not None
            else base_registry.latest())
    registry = run_finetune(manifest, base, _train_config(args), run_id=args.run_id)
    run_dir = save_registry(registry, args.out)
    log.info("fine-tune %s from %s: %d checkpoints in %s", registry.run_id,
             base.checkpoint_id, len(registry.records), run_dir)
    print(str(run_dir))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    registry = load_registry(args.run)
    task = _resolve_task(args.task, args.tasks)
    best, table = run_sweep(registry, task,
                            evaluators=default_evaluators(args.evaluators),
                            repeats=args.repeats, seed_block=args.seed)
    best_vpr = next(r["vpr"] for r in table if r["epoch"] == best.epoch)
    doc = {
        "schema_version": "iml-sweep-v1",
        "run_id": registry.run_id,
        "task": task.name,
        "arch_label": _arch_label(registry.config),
        "best_epoch": best.epoch,
        "best_checkpoint_id": best.checkpoint_id,
        "best_vpr": best_vpr,
        "table": table,
    }
    out = Path(args.out) if args.out else Path(args.run) / "sweep.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2))
    for row in table:
        marker = " *" if row["epoch"] == best.epoch else ""
        print(f"epoch {row['epoch']:>5}  vpr {row['vpr']:.3f}{marker}")
    log.info("sweep wrote %s", out)
    return EXIT_OK


def _cmd_eval(args) -> int:
    bundle = load_bundle(args.ckpt)
    task = _resolve_task(args.task, args.tasks)
    report = vpr(task, bundle, default_evaluators(args.evaluators),
                 repeats=args.repeats, seed_block=args.seed)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(report.to_json())
        log.info("wrote %s", args.out)
    print(f"task {task.name}  trials {len(report.trials)}  vpr {report.vpr:.3f}")
    for case_id, rate in sorted(report.per_case.items()):
        print(f"  {case_id}: {rate:.3f}")
    return EXIT_OK


def _cmd_deploy_sim(args) -> int:
    import numpy as np

    bundle = load_bundle(args.ckpt)
    task = _resolve_task(args.task, args.tasks)
    case = task.case(args.case) if args.case else task.cases[0]
    latency = LatencyModel(fixed_delay=args.latency_fixed,
                           jitter_std=args.latency_jitter, seed=args.seed)
    world = world_init(task, case, args.seed)
    world, exec_log, termination = execute_stream(
        bundle, world, task, latency, slack=args.slack,
        rng=np.random.default_rng((args.seed, 0xDE)))
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        exec_log.write_jsonl(args.out)
        log.info("wrote %s", args.out)
    print(f"termination {termination}  success {success(task, world)}  "
          f"executed {exec_log.executed_count()}  discarded {exec_log.discarded_count()}")
    return EXIT_OK


def _cmd_merge(args) -> int:
    merged = merge_datasets(load_manifest(args.a), load_manifest(args.b), args.out)
    log.info("merged %d episodes into %s", len(merged), merged.root)
    print(str(merged.root / "manifest.json"))
    return EXIT_OK


def _cmd_stats(args) -> int:
    stats = compute_stats(load_manifest(args.data))
    print(json.dumps(stats.to_dict(), indent=2))
    return EXIT_OK


def _cmd_report(args) -> int:
    runs = []
    for path in args.runs:
        doc = json.loads(Path(path).read_text())
        if doc.get("schema_version") != "iml-sweep-v1":
            raise SchemaError(f"{path}: expected iml-sweep-v1 sweep output")
        runs.append(RunSummary(task_name=doc["task"], arch_label=doc["arch_label"],
                               best_vpr=doc["best_vpr"], run_id=doc["run_id"]))
    table = comparison_table(runs)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(render_json(table))
        log.info("wrote %s", args.out)
    print(render_text(table))
    return EXIT_OK


# --- argument wiring ----------------------------------------------------------

def _add_train_flags(p: _Parser) -> None:
    p.add_argument("--epochs", type=int, required=True)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--ckpt-every", type=int, default=50)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--run-id", default=None)
    p.add_argument("--out", required=True, help="runs directory")


def build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(prog="imlw", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    subparsers: dict[str, _Parser] = {}

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        p.add_argument("--config", default=None,
                       help=f"JSON run-config file (schema {RUNCONFIG_SCHEMA}); "
                            "flags on the command line take precedence")
        subparsers[name] = p
        return p

    p = add("collect", _cmd_collect, help="scripted demonstration collection")
    p.add_argument("--task", required=True)
    p.add_argument("--tasks", default=None, help="task library JSON (default: builtins)")
    p.add_argument("--cases", default="all", help="comma-separated case ids")
    p.add_argument("--per-case", type=int, default=10)
    p.add_argument("--profile", default="expertA")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", required=True)

    p = add("serve", _cmd_serve, help="teleoperation gateway")
    p.add_argument("--port", type=int, default=8787)
    p.add_argument("--tasks", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--lockstep", action="store_true",
                   help="tick once per control message (deterministic replay)")

    p = add("train", _cmd_train, help="train a diffusion policy")
    p.add_argument("--data", required=True)
    p.add_argument("--encoder", default="enc-small",
                   choices=["enc-small", "enc-large", "enc-pyramid"])
    p.add_argument("--noisenet", default="temporal-conv",
                   choices=["temporal-conv", "attention"])
    _add_train_flags(p)

    p = add("finetune", _cmd_finetune, help="warm-start from a checkpoint")
    p.add_argument("--data", required=True)
    p.add_argument("--from", required=True, help="base run directory")
    p.add_argument("--epoch", type=int, default=None, help="base epoch (default: latest)")
    p.add_argument("--epochs", type=int, required=True)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--ckpt-every", type=int, default=50)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--run-id", default=None)
    p.add_argument("--out", required=True)

    p = add("sweep", _cmd_sweep, help="evaluate every checkpoint, pick the best")
    p.add_argument("--run", required=True, help="run directory")
    p.add_argument("--task", required=True)
    p.add_argument("--tasks", default=None)
    p.add_argument("--evaluators", type=int, default=4)
    p.add_argument("--repeats", type=int, default=DEFAULT_REPEATS)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default=None, help="sweep JSON path (default: <run>/sweep.json)")

    p = add("eval", _cmd_eval, help="VPR report for one checkpoint bundle")
    p.add_argument("--ckpt", required=True, help="checkpoint .bundle file")
    p.add_argument("--task", required=True)
    p.add_argument("--tasks", default=None)
    p.add_argument("--evaluators", type=int, default=4)
    p.add_argument("--repeats", type=int, default=DEFAULT_REPEATS)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default=None, help="VPR report JSON path")

    p = add("deploy-sim", _cmd_deploy_sim, help="latency-gated deployment rollout")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--task", required=True)
    p.add_argument("--tasks", default=None)
    p.add_argument("--case", default=None)
    p.add_argument("--latency-fixed", type=float, default=0.0)
    p.add_argument("--latency-jitter", type=float, default=0.0)
    p.add_argument("--slack", type=float, default=DEFAULT_SLACK)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", default=None, help="execution log JSONL path")

    p = add("merge", _cmd_merge, help="merge two datasets")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--out", required=True)

    p = add("stats", _cmd_stats, help="print normalization statistics")
    p.add_argument("--data", required=True)

    p = add("report", _cmd_report, help="architecture comparison table")
    p.add_argument("--runs", nargs="+", required=True, help="sweep JSON files")
    p.add_argument("--out", default=None, help="table JSON path")

    return parser, subparsers


def _extract_config_path(argv: list[str]) -> str | None:
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def _apply_config(subparser: _Parser, path: str) -> None:
    """Install config values as parser defaults; explicit flags still win."""
    doc = json.loads(Path(path).read_text())
    if doc.get("schema_version") != RUNCONFIG_SCHEMA:
        raise SchemaError(f"{path}: expected schema {RUNCONFIG_SCHEMA}")
    body = {k: v for k, v in doc.items() if k != "schema_version"}
    known = {a.dest for a in subparser._actions} - {"help"}
    unknown = set(body) - known
    if unknown:
        raise ConfigurationError(f"{path}: unknown keys {sorted(unknown)}")
    subparser.set_defaults(**body)
    for action in subparser._actions:
        if action.dest in body:
            action.required = False  # a config value satisfies required flags


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    try:
        command = argv[0] if argv and not argv[0].startswith("-") else None
        config_path = _extract_config_path(argv)
        if command in subparsers and config_path is not None:
            _apply_config(subparsers[command], config_path)
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return args.fn(args)
    except (NumericError, StallError) as e:
        log.error("numeric failure: %s", e)
        return EXIT_NUMERIC
    except (DataError, SchemaError, ConfigurationError, FileNotFoundError, KeyError) as e:
        log.error("%s", e)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())

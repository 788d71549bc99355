"""Builtin task library: desk-scale analogs parameterized by object/receptacle layouts."""

from __future__ import annotations

import itertools
import json
from pathlib import Path

from ..errors import SchemaError
from .types import SHAPE_DISC, SHAPE_SQUARE, SHAPE_TRIANGLE, CaseSetup, TaskSpec

TASK_SCHEMA_VERSION = "iml-tasks-v1"

_JITTER = 0.01
_REC_R = 0.06


def _cases_grid(xs, ys):
    return [(x, y) for y in ys for x in xs]


def _pick_place() -> TaskSpec:
    spots = _cases_grid([0.2, 0.35, 0.5, 0.65, 0.8], [0.6, 0.75])
    cases = tuple(
        CaseSetup(
            case_id=f"case{i}",
            object_placements=(((x, y, 0.04, 0, SHAPE_SQUARE)),),
            receptacle_placements=((0.5, 0.3, _REC_R),),
            rng_jitter=_JITTER,
        )
        for i, (x, y) in enumerate(spots)
    )
    return TaskSpec(
        name="pick_place", object_count=1, receptacle_count=1, cases=cases,
        uses_color=False, uses_size=False, uses_shape=False,
        logic_steps=1, success_rule="pick_place",
    )


def _block_pick() -> TaskSpec:
    # red block to the left plate, green block to the right plate; sides alternate
    slots = [(0.3, 0.65), (0.7, 0.65), (0.4, 0.75), (0.6, 0.55), (0.5, 0.7)]
    cases = []
    for i in range(10):
        a = slots[i % len(slots)]
        b = slots[(i + 2) % len(slots)]
        red, green = (a, b) if i % 2 == 0 else (b, a)
        cases.append(CaseSetup(
            case_id=f"case{i}",
            object_placements=(
                (red[0], red[1], 0.04, 0, SHAPE_SQUARE),
                (green[0], green[1], 0.04, 1, SHAPE_SQUARE),
            ),
            receptacle_placements=((0.32, 0.25, _REC_R), (0.68, 0.25, _REC_R)),
            rng_jitter=_JITTER,
        ))
    return TaskSpec(
        name="block_pick", object_count=2, receptacle_count=2, cases=tuple(cases),
        uses_color=True, uses_size=False, uses_shape=False,
        logic_steps=2, success_rule="color_match",
    )


def _cup_stack() -> TaskSpec:
    slots = [(0.25, 0.6), (0.75, 0.6), (0.35, 0.75), (0.65, 0.75), (0.5, 0.62)]
    cases = []
    for i in range(10):
        a = slots[i % len(slots)]
        b = slots[(i + 1 + i // 5) % len(slots)]
        cases.append(CaseSetup(
            case_id=f"case{i}",
            object_placements=(
                (a[0], a[1], 0.045, 4, SHAPE_DISC),
                (b[0], b[1], 0.045, 2, SHAPE_DISC),
            ),
            receptacle_placements=((0.5, 0.28, 0.07),),
            rng_jitter=_JITTER,
        ))
    return TaskSpec(
        name="cup_stack", object_count=2, receptacle_count=1, cases=tuple(cases),
        uses_color=True, uses_size=False, uses_shape=False,
        logic_steps=2, success_rule="stack_order",
    )


def _which_cube() -> TaskSpec:
    # three cubes of distinct sizes, each bound to its own card (receptacle)
    sizes = (0.03, 0.045, 0.06)
    base = [(0.3, 0.65), (0.5, 0.72), (0.7, 0.65)]
    cases = []
    for i, perm in enumerate(itertools.permutations(range(3))):
        if i >= 10:
            break
        cases.append(CaseSetup(
            case_id=f"case{i}",
            object_placements=tuple(
                (base[perm[j]][0], base[perm[j]][1], sizes[j], 3, SHAPE_SQUARE)
                for j in range(3)
            ),
            receptacle_placements=((0.25, 0.28, _REC_R), (0.5, 0.28, _REC_R), (0.75, 0.28, _REC_R)),
            rng_jitter=_JITTER,
        ))
    # permutations(3) gives 6; repeat with shifted rows to reach 10 cases
    extra_base = [(0.3, 0.58), (0.5, 0.8), (0.7, 0.58)]
    for i, perm in enumerate(itertools.permutations(range(3))):
        if len(cases) >= 10:
            break
        cases.append(CaseSetup(
            case_id=f"case{6 + i}",
            object_placements=tuple(
                (extra_base[perm[j]][0], extra_base[perm[j]][1], sizes[j], 3, SHAPE_SQUARE)
                for j in range(3)
            ),
            receptacle_placements=((0.25, 0.28, _REC_R), (0.5, 0.28, _REC_R), (0.75, 0.28, _REC_R)),
            rng_jitter=_JITTER,
        ))
    return TaskSpec(
        name="which_cube", object_count=3, receptacle_count=3, cases=tuple(cases),
        uses_color=False, uses_size=True, uses_shape=False,
        logic_steps=3, success_rule="index_match",
    )


def _pick_extreme(name: str, rule: str, n_objects: int, n_cases: int) -> TaskSpec:
    sizes3 = (0.03, 0.045, 0.06)
    sizes4 = (0.03, 0.042, 0.054, 0.066)
    sizes = sizes3 if n_objects == 3 else sizes4
    base3 = [(0.3, 0.65), (0.5, 0.72), (0.7, 0.65)]
    base4 = [(0.25, 0.65), (0.45, 0.74), (0.6, 0.58), (0.78, 0.68)]
    base = base3 if n_objects == 3 else base4
    cases = []
    for i, perm in enumerate(itertools.permutations(range(n_objects))):
        if i >= n_cases:
            break
        cases.append(CaseSetup(
            case_id=f"case{i}",
            object_placements=tuple(
                (base[perm[j]][0], base[perm[j]][1], sizes[j], 3, SHAPE_SQUARE)
                for j in range(n_objects)
            ),
            receptacle_placements=((0.5, 0.28, _REC_R),),
            rng_jitter=_JITTER,
        ))
    return TaskSpec(
        name=name, object_count=n_objects, receptacle_count=1, cases=tuple(cases),
        uses_color=False, uses_size=True, uses_shape=False,
        logic_steps=2, success_rule=rule,
    )


def builtin_tasks() -> list[TaskSpec]:
    """All builtin task analogs."""
    return [
        _pick_place(),
        _block_pick(),
        _cup_stack(),
        _which_cube(),
        _pick_extreme("pick_small", "pick_smallest", 3, 6),
        _pick_extreme("pick_big", "pick_biggest", 3, 6),
        _pick_extreme("pick_big_v2", "pick_biggest", 4, 12),
    ]


def get_task(name: str) -> TaskSpec:
    for task in builtin_tasks():
        if task.name == name:
            return task
    raise KeyError(name)


# --- JSON import/export ------------------------------------------------------

def task_to_dict(task: TaskSpec) -> dict:
    return {
        "name": task.name,
        "object_count": task.object_count,
        "receptacle_count": task.receptacle_count,
        "uses_color": task.uses_color,
        "uses_size": task.uses_size,
        "uses_shape": task.uses_shape,
        "logic_steps": task.logic_steps,
        "success_rule": task.success_rule,
        "max_rollout_time": task.max_rollout_time,
        "cases": [
            {
                "case_id": c.case_id,
                "objects": [list(p) for p in c.object_placements],
                "receptacles": [list(p) for p in c.receptacle_placements],
                "rng_jitter": c.rng_jitter,
            }
            for c in task.cases
        ],
    }


def task_from_dict(d: dict) -> TaskSpec:
    return TaskSpec(
        name=d["name"],
        object_count=d["object_count"],
        receptacle_count=d["receptacle_count"],
        cases=tuple(
            CaseSetup(
                case_id=c["case_id"],
                object_placements=tuple(tuple(p) for p in c["objects"]),
                receptacle_placements=tuple(tuple(p) for p in c["receptacles"]),
                rng_jitter=c.get("rng_jitter", 0.0),
            )
            for c in d["cases"]
        ),
        uses_color=d["uses_color"],
        uses_size=d["uses_size"],
        uses_shape=d["uses_shape"],
        logic_steps=d["logic_steps"],
        success_rule=d["success_rule"],
        max_rollout_time=d.get("max_rollout_time", 20.0),
    )


def save_task_library(tasks: list[TaskSpec], path: str | Path, profiles: list[dict] | None = None) -> None:
    doc = {
        "schema_version": TASK_SCHEMA_VERSION,
        "tasks": [task_to_dict(t) for t in tasks],
    }
    if profiles is not None:
        doc["profiles"] = profiles
    Path(path).write_text(json.dumps(doc, indent=2))


def load_task_library(path: str | Path) -> tuple[list[TaskSpec], list[dict]]:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema_version") != TASK_SCHEMA_VERSION:
        raise SchemaError(f"expected schema {TASK_SCHEMA_VERSION}, got {doc.get('schema_version')}")
    return [task_from_dict(d) for d in doc["tasks"]], doc.get("profiles", [])

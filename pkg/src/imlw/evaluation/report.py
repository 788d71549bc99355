"""Comparison table: task features as rows, one VPR column per architecture."""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..sim.tasks import get_task


@dataclass(frozen=True)
class RunSummary:
    task_name: str
    arch_label: str  # e.g. "enc-small/temporal-conv"
    best_vpr: float
    run_id: str = ""


FEATURE_COLUMNS = ["Task", "Objects", "Receps", "Cases", "Color", "Size", "Shape", "Logic"]


def comparison_table(runs: list[RunSummary]) -> dict:
    """Rows keyed by task, VPR cells keyed by architecture label."""
    arch_labels = []
    for run in runs:
        if run.arch_label not in arch_labels:
            arch_labels.append(run.arch_label)
    tasks = []
    for run in runs:
        if run.task_name not in tasks:
            tasks.append(run.task_name)
    rows = []
    for name in tasks:
        task = get_task(name)
        cells = {}
        for run in runs:
            if run.task_name == name:
                cells[run.arch_label] = run.best_vpr
        rows.append({
            "task": name,
            "object_count": task.object_count,
            "receptacle_count": task.receptacle_count,
            "cases": len(task.cases),
            "color": task.uses_color,
            "size": task.uses_size,
            "shape": task.uses_shape,
            "logic_steps": task.logic_steps,
            "vpr": cells,
        })
    return {"schema_version": "iml-report-v1", "architectures": arch_labels, "rows": rows}


def render_text(table: dict) -> str:
    arch_labels = table["architectures"]
    headers = FEATURE_COLUMNS + arch_labels
    lines = []
    body = []
    for row in table["rows"]:
        body.append([
            row["task"], str(row["object_count"]), str(row["receptacle_count"]),
            str(row["cases"]),
            "Yes" if row["color"] else "No",
            "Yes" if row["size"] else "No",
            "Yes" if row["shape"] else "No",
            str(row["logic_steps"]),
        ] + [
            f"{row['vpr'][a] * 100:.1f}%" if a in row["vpr"] else "-"
            for a in arch_labels
        ])
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h)
              for i, h in enumerate(headers)]
    lines.append("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    lines.append("  ".join("-" * w for w in widths))
    for r in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return "\n".join(lines)


def render_json(table: dict) -> str:
    return json.dumps(table, indent=2)

"""Accuracy tables in the layout (method x hop bucket + Total)."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from ..benchmark import HopBucket, Task
from ..flatten import Method
from .runner import EvalRecord

COLUMNS = [b.label for b in HopBucket] + ["Total"]


def _method_order(name: str) -> tuple[int, str]:
    values = [m.value for m in Method]
    return (values.index(name) if name in values else len(values), name)


@dataclass
class Row:
    method: str
    task: str
    correct: dict[str, int] = field(default_factory=lambda: defaultdict(int))
    total: dict[str, int] = field(default_factory=lambda: defaultdict(int))
    malformed: int = 0
    errors: int = 0

    def accuracy(self, column: str) -> float | None:
        n = self.total.get(column, 0)
        return round(100.0 * self.correct.get(column, 0) / n, 2) if n else None


@dataclass
class Report:
    rows: list[Row]
    mean_tokens: dict[str, float]

    @property
    def empty(self) -> bool:
        return not self.rows

    def to_dict(self) -> dict:
        return {
            "columns": COLUMNS,
            "rows": [
                {
                    "method": r.method,
                    "task": r.task,
                    "accuracy": {c: r.accuracy(c) for c in COLUMNS},
                    "cases": {c: r.total.get(c, 0) for c in COLUMNS},
                    "malformed": r.malformed,
                    "errors": r.errors,
                }
                for r in self.rows
            ],
            "mean_tokens": self.mean_tokens,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        if self.empty:
            return "(no records)\n"
        width = max(len("Method"), *(len(r.method) for r in self.rows))
        out = []
        for task in Task:
            rows = [r for r in self.rows if r.task == task.value]
            if not rows:
                continue
            out.append(f"Task {task.value}")
            out.append(f"{'Method':<{width}}  " + "  ".join(f"{c:>7}" for c in COLUMNS))
            for r in rows:
                cells = []
                for c in COLUMNS:
                    acc = r.accuracy(c)
                    cells.append(f"{acc:7.2f}" if acc is not None else f"{'-':>7}")
                out.append(f"{r.method:<{width}}  " + "  ".join(cells))
            out.append("")
        out.append(f"{'Method':<{width}}  {'cases':>7}  {'malformed':>9}  {'errors':>6}  {'tokens':>9}")
        per_method: dict[str, list[int]] = defaultdict(lambda: [0, 0, 0])
        for r in self.rows:
            agg = per_method[r.method]
            agg[0] += r.total.get("Total", 0)
            agg[1] += r.malformed
            agg[2] += r.errors
        for method in sorted(per_method, key=_method_order):
            n, bad, err = per_method[method]
            out.append(f"{method:<{width}}  {n:>7}  {bad:>9}  {err:>6}  "
                       f"{self.mean_tokens.get(method, 0.0):>9.2f}")
        return "\n".join(out) + "\n"


def aggregate(records: Iterable[EvalRecord]) -> Report:
    """Pool records by (method, task, bucket); endpoint errors are counted, not graded."""
    rows: dict[tuple[str, str], Row] = {}
    tokens: dict[str, list[int]] = defaultdict(list)
    for rec in records:
        row = rows.setdefault((rec.method, rec.task), Row(rec.method, rec.task))
        tokens[rec.method].append(rec.token_count)
        if rec.error is not None:
            row.errors += 1
            continue
        label = HopBucket(rec.bucket).label
        for column in (label, "Total"):
            row.total[column] += 1
            row.correct[column] += rec.correct
        row.malformed += rec.malformed
    ordered = sorted(rows.values(), key=lambda r: (r.task, _method_order(r.method)))
    mean_tokens = {m: sum(v) / len(v) for m, v in sorted(tokens.items(), key=lambda kv: _method_order(kv[0]))}
    return Report(ordered, mean_tokens)

"""Edge-prediction test sets: hop-bucket pair sampling and answer grading."""
from __future__ import annotations

import enum
import hashlib
import json
import os
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .graph import UNREACHABLE, Graph, distance_table, simple_path_of_length_exists

SCHEMA_VERSION = 1


class HopBucket(str, enum.Enum):
    H1 = "H1"
    H2 = "H2"
    H3 = "H3"
    H5PLUS = "H5plus"

    @property
    def label(self) -> str:
        return {"H1": "1-hop", "H2": "2-hop", "H3": "3-hop", "H5plus": "≥5-hop"}[self.value]

    @classmethod
    def of_distance(cls, d: int) -> "HopBucket | None":
        """Bucket for an undirected shortest distance; 4 hops and unreachable have none."""
        if d in (1, 2, 3):
            return (cls.H1, cls.H2, cls.H3)[d - 1]
        if d >= 5:
            return cls.H5PLUS
        return None

    def admits(self, d: int) -> bool:
        return HopBucket.of_distance(d) is self


class Task(str, enum.Enum):
    EP_CP = "EP_CP"
    EP_DP = "EP_DP"


@dataclass(frozen=True)
class TestCase:
    __test__ = False  # keep pytest from collecting this class

    graph: int
    source: int
    target: int
    bucket: HopBucket
    task: Task
    gold_cp: bool
    gold_dp: int  # directed shortest distance, -1 when unreachable

    @property
    def key(self) -> str:
        return f"{self.graph}:{self.source}:{self.target}:{self.task.value}"

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "src": self.source,
            "dst": self.target,
            "bucket": self.bucket.value,
            "task": self.task.value,
            "gold_cp": self.gold_cp,
            "gold_dp": self.gold_dp,
            "schema": SCHEMA_VERSION,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TestCase":
        if doc.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ValueError(f"unsupported benchmark schema {doc.get('schema')}")
        return cls(int(doc["graph"]), int(doc["src"]), int(doc["dst"]), HopBucket(doc["bucket"]),
                   Task(doc["task"]), bool(doc["gold_cp"]), int(doc["gold_dp"]))


def sample_pairs(g: Graph, seed: int | str, per_bucket: int = 4,
                 graph_id: int = 0) -> list[tuple[int, int, HopBucket]]:
    """Ordered node pairs per hop bucket, sampled uniformly without replacement."""
    rng = random.Random(f"{seed}:{graph_id}")
    undirected = distance_table(g, respect_direction=False)
    candidates: dict[HopBucket, list[tuple[int, int]]] = {b: [] for b in HopBucket}
    for u in range(g.node_count):
        for v in range(g.node_count):
            if u != v:
                bucket = HopBucket.of_distance(undirected[u][v])
                if bucket is not None:
                    candidates[bucket].append((u, v))
    chosen = []
    for bucket in HopBucket:
        pool = candidates[bucket]
        picked = pool if len(pool) <= per_bucket else sorted(rng.sample(pool, per_bucket))
        chosen += [(u, v, bucket) for u, v in picked]
    return chosen


def sample_cases(g: Graph, seed: int | str, per_bucket: int = 4, graph_id: int = 0,
                 tasks: Sequence[Task] = (Task.EP_CP, Task.EP_DP)) -> list[TestCase]:
    """Same sampled pairs for every task; gold labels from directed oracles."""
    directed = distance_table(g, respect_direction=True)
    cases = []
    for task in tasks:
        for u, v, bucket in sample_pairs(g, seed, per_bucket, graph_id):
            d = directed[u][v]
            cases.append(TestCase(graph_id, u, v, bucket, task, d != UNREACHABLE, d))
    return cases


@dataclass
class BenchmarkSet:
    dataset: str
    seed: int | str
    cases: list[TestCase] = field(default_factory=list)
    per_bucket: int = 4

    def bucket_counts(self, task: Task = Task.EP_CP) -> dict[str, int]:
        counts = Counter(c.bucket for c in self.cases if c.task is task)
        return {b.label: counts.get(b, 0) for b in HopBucket}

    def label_balance(self) -> dict[str, float]:
        cp = [c for c in self.cases if c.task is Task.EP_CP]
        return {"EP_CP_yes_fraction": sum(c.gold_cp for c in cp) / len(cp) if cp else 0.0}

    def manifest(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "dataset": self.dataset,
            "seed": self.seed,
            "per_bucket": self.per_bucket,
            "graphs": len({c.graph for c in self.cases}),
            "cases": len(self.cases),
            "bucket_counts": {t.value: self.bucket_counts(t) for t in Task},
            "label_balance": self.label_balance(),
        }


def build_benchmark(graphs: Sequence[Graph], seed: int | str, per_bucket: int = 4,
                    dataset: str = "", graph_ids: Iterable[int] | None = None,
                    tasks: Sequence[Task] = (Task.EP_CP, Task.EP_DP)) -> BenchmarkSet:
    ids = list(graph_ids) if graph_ids is not None else list(range(len(graphs)))
    bench = BenchmarkSet(dataset, seed, per_bucket=per_bucket)
    for gid in ids:
        bench.cases += sample_cases(graphs[gid], seed, per_bucket, gid, tasks)
    bench.cases.sort(key=lambda c: (c.task.value, c.graph, list(HopBucket).index(c.bucket),
                                    c.source, c.target))
    return bench


def subsample_graph_ids(total: int, k: int | None, seed: int | str) -> list[int]:
    if k is None or k >= total:
        return list(range(total))
    return sorted(random.Random(f"subsample:{seed}").sample(range(total), k))


def file_sha256(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_benchmark(bench: BenchmarkSet, path: str | Path, dataset_path: str | Path | None = None) -> dict:
    """Write cases as JSONL and a ``<path>.manifest.json`` next to it."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for case in bench.cases:
            fh.write(json.dumps(case.to_dict(), separators=(",", ":")) + "\n")
    manifest = bench.manifest()
    if dataset_path is not None:
        dataset_path = Path(dataset_path)
        manifest["dataset_path"] = str(Path(_relpath(dataset_path, path.parent)))
        manifest["dataset_sha256"] = _dataset_hash(dataset_path)
    manifest["cases_sha256"] = file_sha256(path)
    manifest_path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def manifest_path(bench_path: str | Path) -> Path:
    bench_path = Path(bench_path)
    return bench_path.with_name(bench_path.name + ".manifest.json")


def _relpath(target: Path, base: Path) -> str:
    return os.path.relpath(target.resolve(), base.resolve())


def _dataset_hash(path: Path) -> str:
    if path.is_dir():
        h = hashlib.sha256()
        for f in sorted(path.iterdir()):
            if f.is_file():
                h.update(f.name.encode())
                h.update(f.read_bytes())
        return h.hexdigest()
    return file_sha256(path)


def read_benchmark(path: str | Path) -> list[TestCase]:
    with open(path, encoding="utf-8") as fh:
        return [TestCase.from_dict(json.loads(line)) for line in fh if line.strip()]


def grade_cp(case: TestCase, answer: bool) -> bool:
    return bool(answer) == case.gold_cp


def grade_dp(g: Graph, case: TestCase, answer: int) -> bool:
    """Correct when ``answer`` is the length of any simple path (or -1 if none exists)."""
    if answer < -1:
        return False
    if case.gold_dp == UNREACHABLE:
        return answer == -1
    if answer < 1:
        return False
    return simple_path_of_length_exists(g, case.source, case.target, answer)


"""Run a benchmark against a client, persisting graded records as JSONL.

Results are append-only: a re-run reads the existing file, skips every
(case, method) that already has a non-error record and only queries the
rest.  Worker threads call the client; the calling thread is the single
writer.
"""
from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from ..benchmark import Task, TestCase, grade_cp, grade_dp
from ..flatten import FlattenedGraph, FlattenOptions, Method, flatten
from ..graph import Graph
from .clients import ClientError
from .prompts import MALFORMED, PromptRecord, build_prompt, parse_answer
from .tokens import Tokenizer

log = logging.getLogger(__name__)

Client = Callable[[PromptRecord], str]


@dataclass
class EvalRecord:
    key: str
    graph: int
    source: int
    target: int
    task: str
    bucket: str
    method: str
    raw: str | None
    parsed: object
    correct: bool
    malformed: bool
    token_count: int
    latency_ms: float
    error: str | None = None

    def to_json(self) -> str:
        doc = asdict(self)
        if self.parsed is MALFORMED:
            doc["parsed"] = "MALFORMED"
        return json.dumps(doc, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> "EvalRecord":
        return cls(**doc)


def grade(g: Graph, prompt: PromptRecord, raw: str, latency_ms: float) -> EvalRecord:
    case = prompt.case
    parsed = parse_answer(case.task, raw)
    malformed = parsed is MALFORMED
    if malformed:
        correct = False
    elif case.task is Task.EP_CP:
        correct = grade_cp(case, parsed == "yes")
    else:
        malformed = parsed < -1
        correct = grade_dp(g, case, parsed)
    return EvalRecord(prompt.key, case.graph, case.source, case.target, case.task.value,
                      case.bucket.value, prompt.method.value, raw,
                      "MALFORMED" if parsed is MALFORMED else parsed,
                      correct, malformed, prompt.token_count, round(latency_ms, 3))


def load_records(path: str | Path) -> list[EvalRecord]:
    path = Path(path)
    if not path.exists():
        return []
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                records.append(EvalRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, TypeError):
                log.warning("ignoring truncated results line in %s", path)
    return records


def latest_records(records: Iterable[EvalRecord]) -> list[EvalRecord]:
    """Last record per key, in canonical key order."""
    by_key = {r.key: r for r in records}
    return [by_key[k] for k in sorted(by_key)]


class PromptFactory:
    """Builds prompts, caching one flattening per (graph, method)."""

    def __init__(self, graphs: Sequence[Graph], opts: FlattenOptions = FlattenOptions(),
                 tokenizer: Tokenizer | None = None):
        self.graphs = graphs
        self.opts = opts
        self.tokenizer = tokenizer
        self._cache: dict[tuple[int, Method], FlattenedGraph] = {}

    def flat(self, graph_id: int, method: Method) -> FlattenedGraph:
        key = (graph_id, method)
        if key not in self._cache:
            self._cache[key] = flatten(self.graphs[graph_id], method, self.opts, self.tokenizer)
        return self._cache[key]

    def __call__(self, case: TestCase, method: Method) -> PromptRecord:
        g = self.graphs[case.graph]
        return build_prompt(self.flat(case.graph, method), case, g.node_count, self.tokenizer)


def run_eval(cases: Sequence[TestCase], graphs: Sequence[Graph], methods: Sequence[Method],
             client: Client, results_path: str | Path, *, opts: FlattenOptions = FlattenOptions(),
             tokenizer: Tokenizer | None = None, concurrency: int = 4,
             limit: int | None = None) -> list[EvalRecord]:
    """Evaluate every (case, method) not yet in ``results_path``; return all records.

    ``limit`` caps the number of new queries (useful to simulate an interrupted run).
    """
    results_path = Path(results_path)
    existing = load_records(results_path)
    done = {r.key for r in existing if r.error is None}
    factory = PromptFactory(graphs, opts, tokenizer)
    pending = [
        factory(case, m) for m in methods for case in cases
        if f"{case.key}:{m.value}" not in done
    ]
    if limit is not None:
        pending = pending[:limit]
    log.info("%d records present, %d to query", len(done), len(pending))

    def work(prompt: PromptRecord) -> EvalRecord:
        t0 = time.perf_counter()
        try:
            raw = client(prompt)
        except ClientError as exc:
            case = prompt.case
            return EvalRecord(prompt.key, case.graph, case.source, case.target, case.task.value,
                              case.bucket.value, prompt.method.value, None, None, False, False,
                              prompt.token_count, 0.0, f"{exc.kind}: {exc}")
        return grade(graphs[prompt.case.graph], prompt, raw, (time.perf_counter() - t0) * 1000)

    results_path.parent.mkdir(parents=True, exist_ok=True)
    new: list[EvalRecord] = []
    with open(results_path, "a", encoding="utf-8") as out, \
            ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        futures = [pool.submit(work, p) for p in pending]
        for fut in as_completed(futures):
            rec = fut.result()
            out.write(rec.to_json() + "\n")
            out.flush()
            new.append(rec)
    return latest_records(existing + new)

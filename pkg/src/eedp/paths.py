"""End-to-end path extraction between DAG endpoints."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .dag import Dag, EndpointSet
from .graph import Graph, PathT, all_simple_paths

Pair = tuple[int, int]


@dataclass(frozen=True)
class PathLimits:
    max_len: int | None = None  # None: node_count - 1
    max_per_pair: int = 10_000
    max_total: int = 100_000


@dataclass
class PathBundle:
    groups: dict[Pair, list[PathT]] = field(default_factory=dict)
    overflow: bool = False
    graph_id: str = ""

    def all_paths(self) -> list[PathT]:
        return [p for paths in self.groups.values() for p in paths]

    @property
    def path_count(self) -> int:
        return sum(len(p) for p in self.groups.values())

    def to_dict(self) -> dict:
        return {
            "pairs": [
                {"start": a, "end": b, "paths": [list(p) for p in paths]}
                for (a, b), paths in self.groups.items()
            ],
            "overflow": self.overflow,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def extract_paths(g: Graph, ends: EndpointSet, limits: PathLimits = PathLimits()) -> PathBundle:
    """All simple paths of ``g`` (not of the DAG) between ordered endpoint pairs."""
    bundle = PathBundle(graph_id=g.fingerprint)
    points = ends.sorted()
    budget = limits.max_total
    for a in points:
        for b in points:
            if a == b:
                continue
            if budget <= 0:
                bundle.overflow = True
                return bundle
            found = all_simple_paths(g, a, b, limits.max_len, min(limits.max_per_pair, budget))
            if found.overflow:
                bundle.overflow = True
            if found.paths:
                bundle.groups[(a, b)] = found.paths
                budget -= len(found.paths)
    return bundle


def classify_dag_paths(bundle: PathBundle, d: Dag) -> list[bool]:
    """Per path (in ``all_paths`` order): are all of its arcs kept in the DAG?"""
    if bundle.graph_id and d.provenance and bundle.graph_id != d.provenance:
        raise ValueError(f"bundle from graph {bundle.graph_id} but DAG from {d.provenance}")
    arcs = d.arc_set
    return [all(arc in arcs for arc in zip(p, p[1:])) for p in bundle.all_paths()]

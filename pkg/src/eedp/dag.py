"""Breadth-first DAG orientation of a graph and endpoint detection."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .graph import Arc, Graph, GraphError


@dataclass(frozen=True)
class Dag:
    node_count: int
    arcs: tuple[Arc, ...]
    provenance: str
    guard_skips: int = 0
    # arcs in insertion order, useful when debugging the traversal
    insertion_order: tuple[Arc, ...] = ()

    @cached_property
    def arc_set(self) -> frozenset[Arc]:
        return frozenset(self.arcs)

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.arcs:
            out[u].append(v)
        return tuple(tuple(vs) for vs in out)

    def to_dict(self) -> dict:
        return {
            "n": self.node_count,
            "directed": True,
            "arcs": [list(a) for a in self.arcs],
            "guard_skips": self.guard_skips,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass(frozen=True)
class EndpointSet:
    sources: frozenset[int]
    sinks: frozenset[int]

    @property
    def endpoints(self) -> frozenset[int]:
        return self.sources | self.sinks

    def sorted(self) -> list[int]:
        return sorted(self.endpoints)


def _reaches(adj: list[list[int]], src: int, dst: int) -> bool:
    if src == dst:
        return True
    seen = {src}
    stack = [src]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v == dst:
                return True
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return False


def build_eedp_dag(g: Graph, start: int = 0) -> Dag:
    """Orient ``g`` into an acyclic graph by breadth-first traversal of its arcs.

    An arc is dropped when its tail has already been expanded (it is both a
    visited head and a queued head) or when its reverse arc is already kept.
    On top of that, an arc that would close a longer directed cycle is
    skipped and counted in ``guard_skips``.  When the queue drains, the
    traversal restarts from the lowest-id node that has arcs but has neither
    seeded a traversal nor been touched by a kept arc.
    """
    if g.node_count == 0:
        raise GraphError("cannot build a DAG from an empty graph")
    g.check_node(start)

    out_arcs = [[(u, v) for v in vs] for u, vs in enumerate(g.successors)]
    kept: set[Arc] = set()
    order: list[Arc] = []
    adj: list[list[int]] = [[] for _ in range(g.node_count)]
    touched = [False] * g.node_count
    seeded = [False] * g.node_count
    visited_heads: set[int] = set()
    future_heads: set[int] = set()
    ever_queued: set[Arc] = set()
    guard_skips = 0

    def traverse(seed: int) -> None:
        nonlocal guard_skips
        seeded[seed] = True
        queue: deque[Arc] = deque()
        for arc in out_arcs[seed]:
            if arc not in ever_queued:
                ever_queued.add(arc)
                queue.append(arc)
        future_heads.add(seed)
        while queue:
            head, tail = queue.popleft()
            if tail in visited_heads and tail in future_heads:
                continue
            if (tail, head) not in kept:
                if _reaches(adj, tail, head):
                    guard_skips += 1
                else:
                    kept.add((head, tail))
                    order.append((head, tail))
                    adj[head].append(tail)
                    touched[head] = touched[tail] = True
                    visited_heads.add(head)
            flag = False
            for arc in out_arcs[tail]:
                if arc in kept or (arc[1], arc[0]) in kept or arc in ever_queued:
                    continue
                ever_queued.add(arc)
                queue.append(arc)
                flag = True
            if flag:
                future_heads.add(tail)

    traverse(start)
    for v in range(g.node_count):
        if not touched[v] and not seeded[v] and (g.successors[v] or g.predecessors[v]):
            traverse(v)

    return Dag(
        node_count=g.node_count,
        arcs=tuple(sorted(kept)),
        provenance=g.fingerprint,
        guard_skips=guard_skips,
        insertion_order=tuple(order),
    )


def is_acyclic(d: Dag | Graph) -> bool:
    """Kahn's algorithm: true iff every node can be removed in topological order."""
    indeg = [0] * d.node_count
    for _, v in d.arcs:
        indeg[v] += 1
    ready = [v for v in range(d.node_count) if indeg[v] == 0]
    consumed = 0
    succ = d.successors
    while ready:
        u = ready.pop()
        consumed += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    return consumed == d.node_count


def endpoints(d: Dag) -> EndpointSet:
    indeg = [0] * d.node_count
    outdeg = [0] * d.node_count
    for u, v in d.arcs:
        outdeg[u] += 1
        indeg[v] += 1
    return EndpointSet(
        sources=frozenset(v for v in range(d.node_count) if indeg[v] == 0),
        sinks=frozenset(v for v in range(d.node_count) if outdeg[v] == 0),
    )

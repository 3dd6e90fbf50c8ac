"""Graph representation, dataset I/O and exact graph oracles.

Graphs are immutable arc sets over dense ``0..n-1`` node ids.  Undirected
inputs are stored as symmetric arc pairs so that directed algorithms
(reachability, the DAG builder) work on them unchanged.
"""
from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence

Arc = tuple[int, int]
PathT = tuple[int, ...]

UNREACHABLE = -1


class GraphError(ValueError):
    """Invalid graph construction or malformed dataset input."""


@dataclass(frozen=True)
class Graph:
    node_count: int
    arcs: tuple[Arc, ...]
    undirected: bool = False

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.arcs:
            out[u].append(v)
        return tuple(tuple(vs) for vs in out)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.arcs:
            inc[v].append(u)
        return tuple(tuple(sorted(us)) for us in inc)

    @cached_property
    def arc_set(self) -> frozenset[Arc]:
        return frozenset(self.arcs)

    @cached_property
    def fingerprint(self) -> str:
        """Content hash; identifies a graph across Dag / PathBundle values."""
        return hashlib.sha1(dumps_graph(self).encode()).hexdigest()[:16]

    @property
    def edge_count(self) -> int:
        """Number of undirected edges (arc pairs) or arcs for directed graphs."""
        return len(self.arcs) // 2 if self.undirected else len(self.arcs)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arc_set

    def check_node(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.node_count):
            raise GraphError(f"node id {v!r} out of range for {self.node_count}-node graph")

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.node_count))


def from_arcs(node_count: int, arcs: Iterable[Sequence[int]], undirected: bool = False) -> Graph:
    """Build a canonical graph: deduplicated, sorted by (head, tail)."""
    if node_count < 0:
        raise GraphError(f"negative node count {node_count}")
    seen: set[Arc] = set()
    for arc in arcs:
        u, v = int(arc[0]), int(arc[1])
        if not (0 <= u < node_count and 0 <= v < node_count):
            raise GraphError(f"arc {(u, v)} references a node outside [0, {node_count})")
        if u == v:
            raise GraphError(f"self-loop {(u, v)} is not allowed")
        seen.add((u, v))
        if undirected:
            seen.add((v, u))
    return Graph(node_count, tuple(sorted(seen)), undirected)


# ---- JSON graph format ------------------------------------------------------

def graph_to_dict(g: Graph) -> dict:
    return {"n": g.node_count, "directed": not g.undirected, "arcs": [list(a) for a in g.arcs]}


def graph_from_dict(doc: dict) -> Graph:
    try:
        return from_arcs(int(doc["n"]), doc["arcs"], undirected=not doc["directed"])
    except (KeyError, TypeError, IndexError) as exc:
        raise GraphError(f"malformed graph document: {exc!r}") from None


def dumps_graph(g: Graph) -> str:
    return json.dumps(graph_to_dict(g), separators=(",", ":"))


def load_graph(path: str | Path) -> Graph:
    return graph_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def save_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_text(dumps_graph(g) + "\n", encoding="utf-8")


def load_graph_collection(path: str | Path) -> list[Graph]:
    """Read a JSON-lines file with one graph document per line."""
    graphs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                graphs.append(graph_from_dict(json.loads(line)))
            except (json.JSONDecodeError, GraphError) as exc:
                raise GraphError(f"{path}:{lineno}: {exc}") from None
    return graphs


def save_graph_collection(graphs: Iterable[Graph], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for g in graphs:
            fh.write(dumps_graph(g) + "\n")


# ---- TU graph-kernel format -------------------------------------------------

def _read_int_lines(path: Path) -> list[list[int]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rows.append([int(tok) for tok in line.split(",")])
            except ValueError:
                raise GraphError(f"{path}:{lineno}: malformed line {line.strip()!r}") from None
    return rows


def load_tu_dataset(adjacency_file: str | Path, graph_indicator_file: str | Path,
                    undirected: bool = True) -> list[Graph]:
    """Load a TU graph-kernel dataset (``<name>_A.txt`` + ``<name>_graph_indicator.txt``).

    Global 1-based node ids are re-densified to per-graph 0-based ids.
    Node and edge labels are ignored.
    """
    indicator = []
    for row in _read_int_lines(Path(graph_indicator_file)):
        if len(row) != 1:
            raise GraphError(f"indicator line must hold one graph id, got {row}")
        indicator.append(row[0])

    # graph ids must appear in contiguous, non-decreasing runs starting at 1
    offsets: list[int] = []  # first global node index of each graph
    prev = 0
    for idx, gid in enumerate(indicator):
        if gid == prev:
            continue
        if gid != prev + 1:
            raise GraphError(f"indicator line {idx + 1}: graph {gid} follows graph {prev}")
        offsets.append(idx)
        prev = gid
    offsets.append(len(indicator))

    arcs: list[list[Arc]] = [[] for _ in range(len(offsets) - 1)]
    for row in _read_int_lines(Path(adjacency_file)):
        if len(row) != 2:
            raise GraphError(f"adjacency line must hold two node ids, got {row}")
        i, j = row[0] - 1, row[1] - 1
        if not (0 <= i < len(indicator) and 0 <= j < len(indicator)):
            raise GraphError(f"adjacency pair {row} references unknown node")
        gi, gj = indicator[i] - 1, indicator[j] - 1
        if gi != gj:
            raise GraphError(f"adjacency pair {row} crosses graphs {gi + 1} and {gj + 1}")
        base = offsets[gi]
        arcs[gi].append((i - base, j - base))

    return [
        from_arcs(offsets[k + 1] - offsets[k], arcs[k], undirected=undirected)
        for k in range(len(arcs))
    ]


def load_tu_directory(directory: str | Path, name: str | None = None) -> list[Graph]:
    """Load ``<dir>/<name>_A.txt`` and ``<dir>/<name>_graph_indicator.txt``."""
    directory = Path(directory)
    if name is None:
        candidates = sorted(directory.glob("*_A.txt"))
        if len(candidates) != 1:
            raise GraphError(f"cannot infer dataset name in {directory}: {candidates}")
        name = candidates[0].name[: -len("_A.txt")]
    return load_tu_dataset(directory / f"{name}_A.txt", directory / f"{name}_graph_indicator.txt")


def write_tu_dataset(graphs: Sequence[Graph], directory: str | Path, name: str) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    base = 0
    with open(directory / f"{name}_A.txt", "w") as fa, \
            open(directory / f"{name}_graph_indicator.txt", "w") as fi:
        for gid, g in enumerate(graphs, 1):
            for u, v in g.arcs:
                fa.write(f"{base + u + 1}, {base + v + 1}\n")
            for _ in range(g.node_count):
                fi.write(f"{gid}\n")
            base += g.node_count


def load_dataset(path: str | Path) -> list[Graph]:
    """Load either a TU directory or a JSON-lines graph collection."""
    path = Path(path)
    if path.is_dir():
        return load_tu_directory(path)
    if not path.exists():
        raise FileNotFoundError(path)
    return load_graph_collection(path)


# ---- oracles ----------------------------------------------------------------

def _bfs_distances(g: Graph, source: int, respect_direction: bool = True) -> list[int]:
    dist = [UNREACHABLE] * g.node_count
    dist[source] = 0
    queue = deque([source])
    succ = g.successors
    pred = g.predecessors
    while queue:
        u = queue.popleft()
        nbrs = succ[u] if respect_direction else succ[u] + pred[u]
        for v in nbrs:
            if dist[v] == UNREACHABLE:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def reachable(g: Graph, source: int, target: int) -> bool:
    g.check_node(source)
    g.check_node(target)
    return _bfs_distances(g, source)[target] != UNREACHABLE


def shortest_distance(g: Graph, source: int, target: int, respect_direction: bool = True) -> int:
    """BFS hop count, or ``UNREACHABLE`` (-1)."""
    g.check_node(source)
    g.check_node(target)
    return _bfs_distances(g, source, respect_direction)[target]


def distance_table(g: Graph, respect_direction: bool = True) -> list[list[int]]:
    return [_bfs_distances(g, s, respect_direction) for s in range(g.node_count)]


@dataclass
class SimplePaths:
    paths: list[PathT] = field(default_factory=list)
    overflow: bool = False

    def __iter__(self) -> Iterator[PathT]:
        return iter(self.paths)

    def __len__(self) -> int:
        return len(self.paths)


def all_simple_paths(g: Graph, source: int, target: int,
                     max_len: int | None = None, max_count: int = 10**6) -> SimplePaths:
    """Enumerate simple directed paths by DFS with ascending neighbour order.

    ``max_len`` bounds the number of arcs; enumeration stops after
    ``max_count`` paths and sets ``overflow``.
    """
    g.check_node(source)
    g.check_node(target)
    if max_len is None:
        max_len = max(g.node_count - 1, 1)
    if max_len < 1 or max_count < 1:
        raise ValueError("max_len and max_count must be >= 1")
    result = SimplePaths()
    if source == target:
        return result

    succ = g.successors
    on_path = [False] * g.node_count
    on_path[source] = True
    path = [source]
    stack = [iter(succ[source])]
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            on_path[path.pop()] = False
            continue
        if on_path[nxt]:
            continue
        if nxt == target:
            result.paths.append(tuple(path) + (target,))
            if len(result.paths) >= max_count:
                result.overflow = True
                break
            continue
        if len(path) < max_len:
            path.append(nxt)
            on_path[nxt] = True
            stack.append(iter(succ[nxt]))
    return result


def simple_path_of_length_exists(g: Graph, source: int, target: int, k: int) -> bool:
    """True iff some simple path with exactly ``k`` arcs joins source to target."""
    g.check_node(source)
    g.check_node(target)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k >= g.node_count or source == target:
        return False
    succ = g.successors
    visited = [False] * g.node_count

    def dfs(u: int, remaining: int) -> bool:
        if remaining == 0:
            return u == target
        visited[u] = True
        for v in succ[u]:
            if visited[v] or (v == target and remaining != 1):
                continue
            if dfs(v, remaining - 1):
                visited[u] = False
                return True
        visited[u] = False
        return False

    return dfs(source, k)

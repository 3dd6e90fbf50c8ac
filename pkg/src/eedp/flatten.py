"""Textual graph representations: EEDP (and its ablations) plus baselines."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field, replace
from xml.sax.saxutils import quoteattr

from .compress import compress, render, render_path
from .dag import build_eedp_dag, endpoints
from .graph import Graph
from .harness.tokens import Tokenizer, count_tokens
from .paths import PathLimits, classify_dag_paths, extract_paths

# All literal wording lives here so formats can be revised without touching logic.
TEMPLATES = {
    "paths_header": "Main paths:",
    "adjlist_header": "Adjacency list:",
    "no_paths": "none",
    "matrix_header": "Nodes: 0..{last}",
    "matrix_header_empty": "Nodes: none",
    "edge": "({u}, {v})",
    "edge_sep": ", ",
    "no_edges_list": "(none)",
    "ego_line": "node {u}: [{nbrs}]",
    "walk_sep": " -> ",
    "nl_edge": "There is a directed edge from node {u} to node {v}.",
    "nl_empty": "The graph has no edges.",
}

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
GRAPHML_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    f'<graphml xmlns="{GRAPHML_NS}" '
    'xmlns:xsi="http://www.w3.org/2001/XMLSchema-instance" '
    f'xsi:schemaLocation="{GRAPHML_NS} {GRAPHML_NS}/1.0/graphml.xsd">'
)


class Method(str, enum.Enum):
    EEDP = "eedp"
    EEDP_NO_ADJLIST = "eedp-no-adjlist"
    EEDP_NO_PATHS = "eedp-no-paths"
    EEDP_NO_ADJLIST_NO_DAGPATHS = "eedp-no-adjlist-no-dagpaths"
    ADJ_MATRIX = "adjmatrix"
    ADJ_LIST = "adjlist"
    EDGE_LIST = "edgelist"
    EGO_GRAPH = "ego"
    WALK_SEQ = "walk"
    GML = "gml"
    GRAPHML = "graphml"
    NATURAL = "natural"

    @classmethod
    def parse(cls, name: str) -> "Method":
        key = name.strip().lower().replace("_", "-")
        for m in cls:
            if key in (m.value, m.name.lower().replace("_", "-")):
                return m
        raise ValueError(f"unknown method {name!r}; choose from {[m.value for m in cls]}")


@dataclass(frozen=True)
class FlattenOptions:
    compress_paths: bool = False
    include_adjlist: bool = True
    include_paths: bool = True
    drop_dag_paths: bool = False
    seed: int = 0
    walk_length: int = 5
    start: int = 0
    limits: PathLimits = PathLimits()

    def __post_init__(self):
        if self.walk_length < 1:
            raise ValueError("walk_length must be positive")
        if not self.include_paths and self.drop_dag_paths:
            raise ValueError("drop_dag_paths needs the path section")


@dataclass
class FlattenedGraph:
    method: Method
    text: str
    token_count: int
    compressed: bool = False
    graph_id: str = ""
    stats: dict = field(default_factory=dict)


def _result(g: Graph, method: Method, text: str, tokenizer: Tokenizer | None,
            compressed: bool = False, **stats) -> FlattenedGraph:
    return FlattenedGraph(method, text, count_tokens(text, tokenizer), compressed,
                          g.fingerprint, stats)


def adjacency_text(g: Graph) -> str:
    items = [
        f"{u}: [{', '.join(map(str, vs))}]" for u, vs in enumerate(g.successors) if vs
    ]
    return "{" + ", ".join(items) + "}"


def _mirrors(forward, paths) -> bool:
    """True when ``paths`` is exactly ``forward`` read backwards (undirected graphs)."""
    return forward is not None and {p[::-1] for p in forward} == set(paths)


def eedp_text(g: Graph, opts: FlattenOptions = FlattenOptions()) -> tuple[str, dict]:
    """Build the EEDP prompt text and a small stats dict."""
    stats: dict = {}
    sections = []
    if opts.include_paths:
        dag = build_eedp_dag(g, opts.start)
        ends = endpoints(dag)
        bundle = extract_paths(g, ends, opts.limits)
        stats.update(
            endpoints=len(ends.endpoints),
            dag_arcs=len(dag.arcs),
            guard_skips=dag.guard_skips,
            path_count=bundle.path_count,
            overflow=bundle.overflow,
        )
        if opts.drop_dag_paths:
            mask = iter(classify_dag_paths(bundle, dag))
            groups = {}
            for pair, paths in bundle.groups.items():
                kept = [p for p in paths if not next(mask)]
                if kept:
                    groups[pair] = kept
        else:
            groups = bundle.groups
        lines = []
        for (a, b), paths in groups.items():
            if a > b and _mirrors(groups.get((b, a)), paths):
                continue
            if opts.compress_paths:
                lines.append(render(compress(paths)))
            else:
                lines.extend(render_path(p) for p in paths)
        stats["rendered_lines"] = len(lines)
        sections.append(TEMPLATES["paths_header"] + "\n" + ("\n".join(lines) or TEMPLATES["no_paths"]))
    if opts.include_adjlist:
        adj = adjacency_text(g)
        sections.append(TEMPLATES["adjlist_header"] + "\n" + adj if sections else adj)
    return "\n".join(sections), stats


def flatten_eedp(g: Graph, opts: FlattenOptions = FlattenOptions(),
                 tokenizer: Tokenizer | None = None) -> FlattenedGraph:
    if not opts.include_paths and not opts.include_adjlist:
        raise ValueError("at least one EEDP section must be included")
    if opts.include_paths and opts.include_adjlist and not opts.drop_dag_paths:
        method = Method.EEDP
    elif not opts.include_paths:
        method = Method.EEDP_NO_PATHS
    elif opts.drop_dag_paths:
        method = Method.EEDP_NO_ADJLIST_NO_DAGPATHS
    else:
        method = Method.EEDP_NO_ADJLIST
    text, stats = eedp_text(g, opts)
    return _result(g, method, text, tokenizer, opts.compress_paths and opts.include_paths, **stats)


def flatten_adj_list(g: Graph, tokenizer: Tokenizer | None = None) -> FlattenedGraph:
    return _result(g, Method.ADJ_LIST, adjacency_text(g), tokenizer)


def flatten_adj_matrix(g: Graph, tokenizer: Tokenizer | None = None) -> FlattenedGraph:
    n = g.node_count
    if n == 0:
        return _result(g, Method.ADJ_MATRIX, TEMPLATES["matrix_header_empty"], tokenizer)
    rows = [TEMPLATES["matrix_header"].format(last=n - 1)]
    for u in range(n):
        row = ["0"] * n
        for v in g.successors[u]:
            row[v] = "1"
        rows.append(" ".join(row))
    return _result(g, Method.ADJ_MATRIX, "\n".join(rows), tokenizer)


def flatten_edge_list(g: Graph, tokenizer: Tokenizer | None = None) -> FlattenedGraph:
    text = TEMPLATES["edge_sep"].join(TEMPLATES["edge"].format(u=u, v=v) for u, v in g.arcs)
    return _result(g, Method.EDGE_LIST, text or TEMPLATES["no_edges_list"], tokenizer)


def flatten_ego_graph(g: Graph, tokenizer: Tokenizer | None = None) -> FlattenedGraph:
    lines = [
        TEMPLATES["ego_line"].format(u=u, nbrs=", ".join(map(str, g.successors[u])))
        for u in range(g.node_count)
    ]
    return _result(g, Method.EGO_GRAPH, "\n".join(lines), tokenizer)


def flatten_walk_sequence(g: Graph, seed: int = 0, walk_length: int = 5,
                          tokenizer: Tokenizer | None = None) -> FlattenedGraph:
    """One uniform random walk of at most ``walk_length`` nodes from every node."""
    rng = random.Random(seed)
    lines = []
    for start in range(g.node_count):
        walk = [start]
        while len(walk) < walk_length and g.successors[walk[-1]]:
            walk.append(rng.choice(g.successors[walk[-1]]))
        lines.append(TEMPLATES["walk_sep"].join(map(str, walk)))
    return _result(g, Method.WALK_SEQ, "\n".join(lines), tokenizer)


def flatten_gml(g: Graph, tokenizer: Tokenizer | None = None) -> FlattenedGraph:
    lines = ["graph [", "  directed 1"]
    for v in range(g.node_count):
        lines += ["  node [", f"    id {v}", "  ]"]
    for u, v in g.arcs:
        lines += ["  edge [", f"    source {u}", f"    target {v}", "  ]"]
    lines.append("]")
    return _result(g, Method.GML, "\n".join(lines), tokenizer)


def flatten_graphml(g: Graph, tokenizer: Tokenizer | None = None) -> FlattenedGraph:
    lines = [GRAPHML_HEADER, '  <graph id="G" edgedefault="directed">']
    lines += [f"    <node id={quoteattr(f'n{v}')}/>" for v in range(g.node_count)]
    lines += [f'    <edge source="n{u}" target="n{v}"/>' for u, v in g.arcs]
    lines += ["  </graph>", "</graphml>"]
    return _result(g, Method.GRAPHML, "\n".join(lines), tokenizer)


def flatten_natural_language(g: Graph, tokenizer: Tokenizer | None = None) -> FlattenedGraph:
    text = "\n".join(TEMPLATES["nl_edge"].format(u=u, v=v) for u, v in g.arcs)
    return _result(g, Method.NATURAL, text or TEMPLATES["nl_empty"], tokenizer)


_EEDP_VARIANTS = {
    Method.EEDP: {},
    Method.EEDP_NO_ADJLIST: {"include_adjlist": False},
    Method.EEDP_NO_PATHS: {"include_paths": False},
    Method.EEDP_NO_ADJLIST_NO_DAGPATHS: {"include_adjlist": False, "drop_dag_paths": True},
}


def flatten(g: Graph, method: Method | str, opts: FlattenOptions = FlattenOptions(),
            tokenizer: Tokenizer | None = None) -> FlattenedGraph:
    """Dispatch to the flattener for ``method``."""
    method = Method.parse(method) if isinstance(method, str) else method
    if method in _EEDP_VARIANTS:
        flags = {"include_adjlist": True, "include_paths": True, "drop_dag_paths": False}
        flags.update(_EEDP_VARIANTS[method])
        variant = replace(opts, **flags)
        return flatten_eedp(g, variant, tokenizer)
    if method is Method.WALK_SEQ:
        return flatten_walk_sequence(g, opts.seed, opts.walk_length, tokenizer)
    simple = {
        Method.ADJ_MATRIX: flatten_adj_matrix,
        Method.ADJ_LIST: flatten_adj_list,
        Method.EDGE_LIST: flatten_edge_list,
        Method.EGO_GRAPH: flatten_ego_graph,
        Method.GML: flatten_gml,
        Method.GRAPHML: flatten_graphml,
        Method.NATURAL: flatten_natural_language,
    }
    return simple[method](g, tokenizer)

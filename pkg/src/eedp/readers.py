"""Minimal readers for the lossless flattened formats.

Each reader recovers the node count (when the format carries it) and the
arc set.  They exist to check that a flattener did not drop or invent arcs.
"""
from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from .graph import Arc, Graph, from_arcs

_PAIR = re.compile(r"\((\d+), (\d+)\)")
_SENTENCE = re.compile(r"There is a directed edge from node (\d+) to node (\d+)\.")
_ADJ_ITEM = re.compile(r"(\d+): \[([\d, ]*)\]")
_EGO_LINE = re.compile(r"^node (\d+): \[([\d, ]*)\]$")


def _ints(csv: str) -> list[int]:
    return [int(x) for x in csv.split(",") if x.strip()]


def read_adj_list(text: str) -> set[Arc]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError("adjacency list must be enclosed in braces")
    return {(int(u), v) for u, vs in _ADJ_ITEM.findall(text) for v in _ints(vs)}


def read_adj_matrix(text: str) -> Graph:
    lines = text.strip().splitlines()
    if not lines[0].startswith("Nodes:"):
        raise ValueError("missing node header")
    rows = [line.split() for line in lines[1:]]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    return from_arcs(n, [(u, v) for u, r in enumerate(rows) for v, x in enumerate(r) if x == "1"])


def read_edge_list(text: str) -> set[Arc]:
    return {(int(u), int(v)) for u, v in _PAIR.findall(text)}


def read_natural_language(text: str) -> set[Arc]:
    return {(int(u), int(v)) for u, v in _SENTENCE.findall(text)}


def read_ego_graph(text: str) -> Graph:
    arcs = []
    n = 0
    for line in text.strip().splitlines():
        m = _EGO_LINE.match(line)
        if not m:
            raise ValueError(f"bad ego line {line!r}")
        u = int(m.group(1))
        n = max(n, u + 1)
        arcs += [(u, v) for v in _ints(m.group(2))]
    return from_arcs(n, arcs)


def read_gml(text: str) -> Graph:
    """Parse the ``graph [ node [ id N ] edge [ source U target V ] ]`` subset."""
    tokens = re.findall(r"\[|\]|[^\s\[\]]+", text)
    stack: list[dict] = []
    root: dict | None = None
    key = None
    for tok in tokens:
        if tok == "[":
            item = {"_kind": key, "_items": []}
            if stack:
                stack[-1]["_items"].append(item)
            else:
                root = item
            stack.append(item)
            key = None
        elif tok == "]":
            stack.pop()
        elif key is None:
            key = tok
        else:
            stack[-1][key] = tok
            key = None
    if root is None or root["_kind"] != "graph":
        raise ValueError("no top-level graph block")
    ids = [int(i["id"]) for i in root["_items"] if i["_kind"] == "node"]
    index = {v: k for k, v in enumerate(ids)}
    arcs = [(index[int(e["source"])], index[int(e["target"])])
            for e in root["_items"] if e["_kind"] == "edge"]
    return from_arcs(len(ids), arcs)


def read_graphml(text: str) -> Graph:
    ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
    root = ET.fromstring(text.encode("utf-8"))
    graph = root.find("g:graph", ns)
    if graph is None:
        raise ValueError("no graph element")
    ids = [n.get("id") for n in graph.findall("g:node", ns)]
    index = {v: k for k, v in enumerate(ids)}
    arcs = [(index[e.get("source")], index[e.get("target")]) for e in graph.findall("g:edge", ns)]
    return from_arcs(len(ids), arcs)

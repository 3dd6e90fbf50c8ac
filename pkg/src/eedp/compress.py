"""Lossless merging of a path group into a generalized-list form.

A group of simple paths sharing start and end nodes is written as a
sequence of shared nodes and branches, e.g. ``0 -> (1 | 2 -> 4) -> 3``.
Each path keeps its own cursor.  All cursors advance together while they
point at the same node.  On divergence every cursor walks its private
segment until the paths reconverge, and the private segments become the
alternatives of a branch.

Reconvergence is taken at the earliest node of the first path's remaining
suffix that (a) occurs in every remaining suffix and (b) splits the group
into a full product of prefixes and suffixes.  Condition (b) keeps the
expansion exact.  The common end node always satisfies both.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .graph import PathT

EMPTY_TOKEN = "ε"


@dataclass(frozen=True)
class Branch:
    alternatives: tuple[PathT, ...]


Segment = Union[int, Branch]


@dataclass(frozen=True)
class CompressedPathTree:
    segments: tuple[Segment, ...]

    @property
    def start(self) -> int:
        return self.segments[0]  # type: ignore[return-value]

    @property
    def end(self) -> int:
        return self.segments[-1]  # type: ignore[return-value]

    @property
    def branches(self) -> list[Branch]:
        return [s for s in self.segments if isinstance(s, Branch)]

    def to_dict(self) -> dict:
        return {
            "segments": [
                {"branch": [list(a) for a in s.alternatives]} if isinstance(s, Branch) else s
                for s in self.segments
            ]
        }


def _unique(items: Iterable) -> list:
    return list(dict.fromkeys(items))


def compress(paths: Sequence[Sequence[int]]) -> CompressedPathTree:
    group = _unique(tuple(p) for p in paths)
    if not group:
        raise ValueError("cannot compress an empty path group")
    start, end = group[0][0], group[0][-1]
    for p in group:
        if p[0] != start or p[-1] != end:
            raise ValueError(f"path {list(p)} does not run from {start} to {end}")

    segments: list[Segment] = []
    cursors = [0] * len(group)
    while True:
        heads = {p[c] for p, c in zip(group, cursors)}
        if len(heads) == 1:
            node = heads.pop()
            segments.append(node)
            if node == end:
                break
            cursors = [c + 1 for c in cursors]
            continue

        suffixes = [p[c:] for p, c in zip(group, cursors)]
        for node in suffixes[0]:
            if not all(node in s for s in suffixes[1:]):
                continue
            cut = [s.index(node) for s in suffixes]
            prefixes = [s[:i] for s, i in zip(suffixes, cut)]
            tails = [s[i:] for s, i in zip(suffixes, cut)]
            distinct_prefixes = _unique(prefixes)
            distinct_tails = _unique(tails)
            if len(distinct_prefixes) * len(distinct_tails) == len(group):
                break
        else:  # pragma: no cover - the shared end node always qualifies
            raise AssertionError("no reconvergence node found")

        if len(distinct_prefixes) == 1:
            segments.extend(distinct_prefixes[0])
        else:
            segments.append(Branch(tuple(distinct_prefixes)))
        group = distinct_tails
        cursors = [0] * len(group)

    return CompressedPathTree(tuple(segments))


def expand(tree: CompressedPathTree) -> list[PathT]:
    choices: list[list[PathT]] = [
        list(s.alternatives) if isinstance(s, Branch) else [(s,)] for s in tree.segments
    ]
    return _unique(tuple(itertools.chain.from_iterable(combo))
                   for combo in itertools.product(*choices))


def render(tree: CompressedPathTree, empty_token: str = EMPTY_TOKEN) -> str:
    parts = []
    for seg in tree.segments:
        if isinstance(seg, Branch):
            alts = [" -> ".join(map(str, a)) if a else empty_token for a in seg.alternatives]
            parts.append("(" + " | ".join(alts) + ")")
        else:
            parts.append(str(seg))
    return " -> ".join(parts)


def render_path(path: Sequence[int]) -> str:
    return " -> ".join(map(str, path))


def parse_rendered(text: str, empty_token: str = EMPTY_TOKEN) -> CompressedPathTree:
    """Inverse of :func:`render` for one line."""
    segments: list[Segment] = []
    pieces = []
    depth = 0
    current = ""
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        current += ch
        if depth == 0 and current.endswith(" -> "):
            pieces.append(current[:-4])
            current = ""
    pieces.append(current)
    for piece in pieces:
        piece = piece.strip()
        if piece.startswith("(") and piece.endswith(")"):
            alts = []
            for alt in piece[1:-1].split(" | "):
                alt = alt.strip()
                alts.append(() if alt == empty_token else tuple(int(x) for x in alt.split(" -> ")))
            segments.append(Branch(tuple(alts)))
        elif piece.isdigit():
            segments.append(int(piece))
        else:
            raise ValueError(f"unparseable segment {piece!r} in {text!r}")
    return CompressedPathTree(tuple(segments))

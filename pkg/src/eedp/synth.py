"""Seeded synthetic graph generators."""
from __future__ import annotations

import random
from collections import deque

from .graph import Graph, from_arcs


def random_graph(rng: random.Random, n: int, p: float, undirected: bool = False) -> Graph:
    """Erdős–Rényi style graph; undirected graphs draw each pair once."""
    if undirected:
        arcs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    else:
        arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return from_arcs(n, arcs, undirected=undirected)


def random_family(count: int, seed: int, min_nodes: int = 2, max_nodes: int = 25) -> list[Graph]:
    """Mixed directed/undirected graphs of varying density."""
    rng = random.Random(seed)
    graphs = []
    for _ in range(count):
        n = rng.randint(min_nodes, max_nodes)
        undirected = rng.random() < 0.5
        # keep expected degree modest so path enumeration stays cheap
        p = rng.uniform(0.5, 2.5) / max(n - 1, 1)
        graphs.append(random_graph(rng, n, min(p, 1.0), undirected))
    return graphs


def generate_merged_like(n_graphs: int, seed: int) -> list[Graph]:
    """Sparse, mostly tree-shaped directed graphs resembling concept-prerequisite maps.

    Each new node attaches to an earlier node chosen with probability
    proportional to degree + 1; arcs mostly point from the older node to the
    newer one.  Population means come out near 13.2 nodes and 12.1 arcs.
    """
    if n_graphs < 1:
        raise ValueError("n_graphs must be >= 1")
    rng = random.Random(seed)
    graphs = []
    for _ in range(n_graphs):
        n = min(max(3, round(rng.gauss(13.16, 4.5))), 32)
        degree = [0] * n
        arcs = []
        for child in range(1, n):
            if rng.random() < 0.02:
                continue  # start a new component
            parent = rng.choices(range(child), weights=[d + 1 for d in degree[:child]])[0]
            degree[parent] += 1
            degree[child] += 1
            arcs.append((parent, child) if rng.random() < 0.75 else (child, parent))
        if rng.random() < 0.19:
            u, v = rng.sample(range(n), 2)
            if (u, v) not in arcs and (v, u) not in arcs:
                arcs.append((min(u, v), max(u, v)))
        graphs.append(from_arcs(n, arcs))
    return graphs


def _tree_distances(adj: list[list[int]], src: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def generate_molecule_like(n_graphs: int, seed: int) -> list[Graph]:
    """Undirected graphs with valence <= 4 and a few 5/6-membered rings.

    A stand-in for small organic molecules (about 23 atoms, 25 bonds) when
    real molecular datasets are not at hand.
    """
    rng = random.Random(seed)
    graphs = []
    for _ in range(n_graphs):
        n = min(max(8, round(rng.gauss(23.1, 4.5))), 38)
        adj: list[list[int]] = [[] for _ in range(n)]
        edges = []
        for child in range(1, n):
            open_atoms = [a for a in range(child) if len(adj[a]) < 4]
            parent = rng.choice(open_atoms[-6:])  # favour chain growth
            adj[parent].append(child)
            adj[child].append(parent)
            edges.append((parent, child))
        rings = min(rng.choice([1, 2, 2, 3, 3, 3, 4, 5]), n // 5)
        for _ in range(rings):
            u = rng.randrange(n)
            if len(adj[u]) >= 4:
                continue
            dist = _tree_distances(adj, u)
            ring_partners = [v for v in range(n) if dist[v] in (4, 5) and len(adj[v]) < 4]
            if ring_partners:
                v = rng.choice(ring_partners)
                adj[u].append(v)
                adj[v].append(u)
                edges.append((u, v))
        graphs.append(from_arcs(n, edges, undirected=True))
    return graphs

from pathlib import Path

import networkx as nx
import pytest

from eedp.flatten import (
    FlattenOptions, Method, flatten, flatten_adj_list, flatten_adj_matrix, flatten_edge_list,
    flatten_eedp, flatten_ego_graph, flatten_gml, flatten_graphml, flatten_natural_language,
    flatten_walk_sequence,
)
from eedp.graph import from_arcs
from eedp.harness.tokens import HeuristicTokenizer
from eedp.readers import (
    read_adj_list, read_adj_matrix, read_edge_list, read_ego_graph, read_gml, read_graphml,
    read_natural_language,
)
from eedp.synth import random_family

from graphml_check import graphml_problems

GOLDEN = Path(__file__).parent / "golden"
EXAMPLE_ARCS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (3, 2)]


def golden(name):
    return (GOLDEN / f"single_arc.{name}.txt").read_text(encoding="utf-8").rstrip("\n")


class TestAdjList:
    def test_reference_example(self):
        assert flatten_adj_list(from_arcs(4, EXAMPLE_ARCS)).text == "{0: [1, 2, 3], 1: [2, 3], 3: [2]}"

    def test_empty(self):
        assert flatten_adj_list(from_arcs(3, [])).text == "{}"

    def test_symmetric_pair(self):
        assert flatten_adj_list(from_arcs(2, [(0, 1)], undirected=True)).text == "{0: [1], 1: [0]}"


class TestEedp:
    def test_diamond_compressed(self, diamond):
        text = flatten_eedp(diamond, FlattenOptions(compress_paths=True)).text
        assert "0 -> (1 | 2) -> 3" in text
        assert "{0: [1, 2], 1: [3], 2: [3]}" in text

    def test_diamond_uncompressed(self, diamond):
        assert flatten_eedp(diamond).text == (
            "Main paths:\n0 -> 1 -> 3\n0 -> 2 -> 3\nAdjacency list:\n{0: [1, 2], 1: [3], 2: [3]}")

    def test_single_arc(self):
        assert flatten_eedp(from_arcs(2, [(0, 1)])).text == golden("eedp")

    def test_no_paths_equals_adjlist(self):
        for g in random_family(100, seed=1):
            a = flatten(g, Method.EEDP_NO_PATHS).text
            assert a == flatten_adj_list(g).text

    def test_no_adjlist(self, diamond):
        assert flatten(diamond, "eedp-no-adjlist").text == "Main paths:\n0 -> 1 -> 3\n0 -> 2 -> 3"

    def test_drop_dag_paths(self):
        g = from_arcs(3, [(0, 1), (1, 2), (0, 2)], undirected=True)
        # Dag {0->1, 0->2, 1->2}; every path using an arc outside it stays
        text = flatten(g, Method.EEDP_NO_ADJLIST_NO_DAGPATHS).text
        assert text == "Main paths:\n2 -> 0\n2 -> 1 -> 0"

    def test_undirected_mirror_rendered_once(self):
        g = from_arcs(3, [(0, 1), (1, 2)], undirected=True)
        assert flatten(g, Method.EEDP_NO_ADJLIST).text == "Main paths:\n0 -> 1 -> 2"

    def test_empty_graph_paths(self):
        assert flatten(from_arcs(2, []), Method.EEDP_NO_ADJLIST).text == "Main paths:\nnone"

    def test_options_validated(self, diamond):
        with pytest.raises(ValueError):
            FlattenOptions(include_paths=False, drop_dag_paths=True)
        with pytest.raises(ValueError):
            flatten_eedp(diamond, FlattenOptions(include_paths=False, include_adjlist=False))

    def test_compressed_never_more_tokens(self):
        tok = HeuristicTokenizer()
        for g in random_family(200, seed=2, max_nodes=14):
            plain = flatten(g, Method.EEDP, FlattenOptions(), tok)
            packed = flatten(g, Method.EEDP, FlattenOptions(compress_paths=True), tok)
            assert packed.token_count <= plain.token_count
            assert len(packed.text) <= len(plain.text)
            assert packed.compressed and not plain.compressed


class TestBaselines:
    def test_matrix(self):
        assert flatten_adj_matrix(from_arcs(2, [(0, 1)])).text == golden("adjmatrix")
        assert flatten_adj_matrix(from_arcs(2, [])).text == "Nodes: 0..1\n0 0\n0 0"
        assert flatten_adj_matrix(from_arcs(2, [(0, 1)], undirected=True)).text == "Nodes: 0..1\n0 1\n1 0"

    def test_edge_list(self):
        assert flatten_edge_list(from_arcs(2, [(0, 1)])).text == "(0, 1)"
        assert flatten_edge_list(from_arcs(2, [(0, 1)], undirected=True)).text == "(0, 1), (1, 0)"
        assert read_edge_list(flatten_edge_list(from_arcs(2, [])).text) == set()

    def test_ego(self):
        text = flatten_ego_graph(from_arcs(4, [(0, 1), (0, 2)])).text
        assert text.splitlines() == ["node 0: [1, 2]", "node 1: []", "node 2: []", "node 3: []"]

    def test_walks(self, chain3):
        assert flatten_walk_sequence(chain3).text.splitlines() == ["0 -> 1 -> 2", "1 -> 2", "2"]

    def test_walk_length_and_arcs(self):
        for g in random_family(50, seed=3):
            lines = flatten_walk_sequence(g, seed=9).text.splitlines()
            assert len(lines) == g.node_count
            for start, line in enumerate(lines):
                walk = [int(x) for x in line.split(" -> ")]
                assert walk[0] == start and len(walk) <= 5
                assert all(g.has_arc(u, v) for u, v in zip(walk, walk[1:]))
                if len(walk) < 5:
                    assert not g.successors[walk[-1]]

    def test_walk_seeds(self):
        g = from_arcs(6, [(u, v) for u in range(6) for v in range(6) if u != v])
        assert flatten_walk_sequence(g, seed=1).text == flatten_walk_sequence(g, seed=1).text
        assert flatten_walk_sequence(g, seed=1).text != flatten_walk_sequence(g, seed=2).text

    def test_natural(self):
        assert flatten_natural_language(from_arcs(2, [(0, 1)])).text == golden("natural")
        assert flatten_natural_language(from_arcs(2, [])).text == "The graph has no edges."

    @pytest.mark.parametrize("name, fn", [
        ("gml", flatten_gml), ("graphml", flatten_graphml), ("adjlist", flatten_adj_list),
        ("edgelist", flatten_edge_list), ("ego", flatten_ego_graph), ("natural", flatten_natural_language),
    ])
    def test_golden(self, name, fn):
        assert fn(from_arcs(2, [(0, 1)])).text == golden(name)

    def test_empty_gml_graphml(self):
        assert flatten_gml(from_arcs(0, [])).text == "graph [\n  directed 1\n]"
        text = flatten_graphml(from_arcs(0, [])).text
        assert "<node" not in text and "<edge" not in text and not graphml_problems(text)


def test_every_method_is_deterministic():
    graphs = random_family(20, seed=6)
    for m in Method:
        for g in graphs:
            opts = FlattenOptions(seed=4)
            assert flatten(g, m, opts).text == flatten(g, m, opts).text


def test_method_parse():
    assert Method.parse("EEDP_NO_PATHS") is Method.EEDP_NO_PATHS
    assert Method.parse("adjlist") is Method.ADJ_LIST
    with pytest.raises(ValueError):
        Method.parse("nope")


class TestRoundTrip:
    corpus = random_family(150, seed=10)

    def test_own_readers(self):
        for g in self.corpus:
            arcs = set(g.arcs)
            assert read_adj_list(flatten_adj_list(g).text) == arcs
            assert read_edge_list(flatten_edge_list(g).text) == arcs
            assert read_natural_language(flatten_natural_language(g).text) == arcs
            assert set(read_adj_matrix(flatten_adj_matrix(g).text).arcs) == arcs
            assert read_ego_graph(flatten_ego_graph(g).text).arcs == g.arcs
            assert read_gml(flatten_gml(g).text).arcs == g.arcs
            assert read_graphml(flatten_graphml(g).text).arcs == g.arcs

    def test_networkx_parses_gml(self):
        for g in self.corpus:
            h = nx.parse_gml(flatten_gml(g).text, label=None)
            assert h.is_directed()
            assert h.number_of_nodes() == g.node_count
            assert set(h.edges()) == set(g.arcs)

    def test_networkx_parses_graphml(self):
        for g in self.corpus:
            h = nx.parse_graphml(flatten_graphml(g).text)
            assert h.is_directed()
            assert sorted(h.nodes()) == sorted(f"n{v}" for v in g)
            assert {(int(u[1:]), int(v[1:])) for u, v in h.edges()} == set(g.arcs)

    def test_graphml_structure(self):
        for g in self.corpus:
            assert graphml_problems(flatten_graphml(g).text) == []

    def test_graphml_checker_catches_faults(self):
        good = flatten_graphml(from_arcs(2, [(0, 1)])).text
        assert graphml_problems(good.replace('target="n1"', 'target="n7"'))
        assert graphml_problems(good.replace('edgedefault="directed"', 'edgedefault="both"'))
        assert graphml_problems(good.replace("<node ", "<vertex ").replace('"n1"/>', '"n1"/>'))
        assert graphml_problems(good[:-5])

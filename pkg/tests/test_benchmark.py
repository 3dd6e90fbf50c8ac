import random

import pytest

from eedp.benchmark import (
    BenchmarkSet, HopBucket, Task, TestCase, build_benchmark, file_sha256, grade_cp, grade_dp,
    manifest_path, read_benchmark, sample_cases, sample_pairs, subsample_graph_ids, write_benchmark,
)
from eedp.graph import UNREACHABLE, from_arcs, reachable, shortest_distance
from eedp.synth import generate_merged_like, generate_molecule_like, random_family

from oracles import floyd_warshall, naive_simple_paths


def chain(n):
    return from_arcs(n, [(i, i + 1) for i in range(n - 1)])


def case(g, s, t, task=Task.EP_DP):
    d = shortest_distance(g, s, t)
    bucket = HopBucket.of_distance(shortest_distance(g, s, t, respect_direction=False))
    return TestCase(0, s, t, bucket, task, d != UNREACHABLE, d)


class TestBuckets:
    def test_of_distance(self):
        assert [HopBucket.of_distance(d) for d in (1, 2, 3, 4, 5, 9, -1)] == [
            HopBucket.H1, HopBucket.H2, HopBucket.H3, None, HopBucket.H5PLUS, HopBucket.H5PLUS, None]
        assert HopBucket.H5PLUS.admits(7) and not HopBucket.H3.admits(4)
        assert HopBucket.H5PLUS.label == "≥5-hop"


class TestSampling:
    def test_chain_pairs_in_both_directions(self):
        g = chain(5)
        cases = sample_cases(g, seed=0, per_bucket=10, tasks=[Task.EP_CP])
        h1 = {(c.source, c.target): c for c in cases if c.bucket is HopBucket.H1}
        assert (0, 1) in h1 and (1, 0) in h1
        assert h1[(0, 1)].gold_cp and not h1[(1, 0)].gold_cp
        assert h1[(1, 0)].gold_dp == -1

    def test_small_set_hand_counts(self):
        # chain of 7: distances 1..6 -> H1 12, H2 10, H3 8, H5plus 6 ordered pairs (4 of dist 5, 2 of dist 6)
        pairs = sample_pairs(chain(7), seed=1, per_bucket=100)
        counts = {b: sum(p[2] is b for p in pairs) for b in HopBucket}
        assert counts == {HopBucket.H1: 12, HopBucket.H2: 10, HopBucket.H3: 8, HopBucket.H5PLUS: 6}
        capped = sample_pairs(chain(7), seed=1)
        assert all(sum(p[2] is b for p in capped) == 4 for b in HopBucket)

    def test_cases_respect_invariants(self):
        graphs = random_family(80, seed=3, max_nodes=14)
        bench = build_benchmark(graphs, seed=5)
        per_graph = {}
        for c in bench.cases:
            g = graphs[c.graph]
            fw = floyd_warshall(g.node_count, g.arcs, directed=False)
            assert c.source != c.target
            assert c.bucket.admits(int(fw[c.source][c.target]))
            assert c.gold_cp == reachable(g, c.source, c.target)
            assert c.gold_dp == shortest_distance(g, c.source, c.target)
            per_graph.setdefault((c.graph, c.task), []).append(c)
        for cs in per_graph.values():
            assert len(cs) <= 16
            assert all(sum(c.bucket is b for c in cs) <= 4 for b in HopBucket)

    def test_tasks_share_pairs(self):
        bench = build_benchmark(random_family(20, seed=4), seed=1)
        cp = [(c.graph, c.source, c.target) for c in bench.cases if c.task is Task.EP_CP]
        dp = [(c.graph, c.source, c.target) for c in bench.cases if c.task is Task.EP_DP]
        assert cp == dp

    def test_deterministic(self, tmp_path):
        graphs = random_family(40, seed=2)
        a = build_benchmark(graphs, seed=9)
        b = build_benchmark(graphs, seed=9)
        assert a.cases == b.cases
        write_benchmark(a, tmp_path / "a.jsonl")
        write_benchmark(b, tmp_path / "b.jsonl")
        assert file_sha256(tmp_path / "a.jsonl") == file_sha256(tmp_path / "b.jsonl")
        assert build_benchmark(graphs, seed=10).cases != a.cases

    def test_subsample(self):
        ids = subsample_graph_ids(100, 10, seed=0)
        assert len(ids) == 10 and ids == sorted(set(ids))
        assert ids == subsample_graph_ids(100, 10, seed=0)
        assert subsample_graph_ids(5, None, 0) == [0, 1, 2, 3, 4]


class TestFiles:
    def test_round_trip_and_manifest(self, tmp_path):
        graphs = random_family(10, seed=1)
        data = tmp_path / "graphs.jsonl"
        data.write_text("x")
        bench = build_benchmark(graphs, seed=0, dataset="toy")
        m = write_benchmark(bench, tmp_path / "b.jsonl", data)
        assert read_benchmark(tmp_path / "b.jsonl") == bench.cases
        assert m["dataset_path"] == "graphs.jsonl"
        assert m["cases"] == len(bench.cases)
        assert manifest_path(tmp_path / "b.jsonl").is_file()
        assert m["bucket_counts"]["EP_CP"] == bench.bucket_counts(Task.EP_CP)

    def test_schema_checked(self):
        doc = case(chain(3), 0, 1).to_dict()
        doc["schema"] = 99
        with pytest.raises(ValueError, match="schema"):
            TestCase.from_dict(doc)


class TestGrading:
    def test_cp(self):
        g = chain(3)
        yes, no = case(g, 0, 1, Task.EP_CP), case(g, 1, 0, Task.EP_CP)
        assert grade_cp(yes, True) and not grade_cp(yes, False)
        assert grade_cp(no, False) and not grade_cp(no, True)

    def test_dp_diamond(self, diamond):
        c = case(diamond, 0, 3)
        assert grade_dp(diamond, c, 2)
        assert not grade_dp(diamond, c, 3)
        assert not grade_dp(diamond, c, -1)

    def test_dp_lengths_two_and_four(self):
        # 0 -> 1 -> 5 and 0 -> 2 -> 3 -> 4 -> 5
        g = from_arcs(6, [(0, 1), (1, 5), (0, 2), (2, 3), (3, 4), (4, 5)])
        assert {len(p) - 1 for p in naive_simple_paths(6, g.arcs, 0, 5)} == {2, 4}
        c = case(g, 0, 5)
        assert [k for k in range(-3, 8) if grade_dp(g, c, k)] == [2, 4]

    def test_dp_unreachable(self, chain3):
        c = case(chain3, 2, 0)
        assert c.gold_dp == -1
        assert [k for k in range(-3, 5) if grade_dp(chain3, c, k)] == [-1]

    def test_dp_exhaustive_on_small_graphs(self):
        rng = random.Random(5)
        for _ in range(60):
            n = rng.randint(2, 7)
            g = from_arcs(n, [(u, v) for u in range(n) for v in range(n)
                              if u != v and rng.random() < 0.35])
            for s in g:
                for t in g:
                    if s == t or HopBucket.of_distance(
                            shortest_distance(g, s, t, respect_direction=False)) is None:
                        continue
                    c = case(g, s, t)
                    lengths = {len(p) - 1 for p in naive_simple_paths(n, g.arcs, s, t)}
                    if c.gold_dp != -1:
                        assert grade_dp(g, c, c.gold_dp)
                    for k in range(-2, n + 1):
                        expect = k in lengths if lengths else k == -1
                        assert grade_dp(g, c, k) == expect


class TestGenerators:
    def test_merged_like_statistics(self):
        graphs = generate_merged_like(1000, seed=0)
        nodes = sum(g.node_count for g in graphs) / 1000
        arcs = sum(len(g.arcs) for g in graphs) / 1000
        assert abs(nodes - 13.16) <= 1.0
        assert abs(arcs - 12.11) <= 1.0
        assert not any(g.undirected for g in graphs)

    def test_merged_like_small_and_seeded(self):
        assert len(generate_merged_like(1, seed=0)) == 1
        assert generate_merged_like(5, seed=0) == generate_merged_like(5, seed=0)
        assert generate_merged_like(5, seed=0) != generate_merged_like(5, seed=1)

    def test_molecule_like(self):
        graphs = generate_molecule_like(50, seed=0)
        assert all(g.undirected for g in graphs)
        assert 15 < sum(g.node_count for g in graphs) / 50 < 30


def test_bucket_counts_shape():
    b = BenchmarkSet("x", 0)
    assert b.bucket_counts() == {"1-hop": 0, "2-hop": 0, "3-hop": 0, "≥5-hop": 0}
    assert b.label_balance() == {"EP_CP_yes_fraction": 0.0}

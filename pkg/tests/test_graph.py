import math

import numpy as np
import pytest

from netrenorm.errors import DomainError, FormatError
from netrenorm.graph import (bfs_distances, build_graph, density, diameter, edge_density,
                             knn_profile, parse_edge_lines, parse_node_meta_lines, read_graph,
                             write_edge_list, write_node_meta)

from oracles import (adjacency, brute_diameter, cycle_edges, hand_pearson, path_edges,
                     random_connected_edges, star_edges, complete_edges)


def test_build_dedups_and_drops_loops():
    g = build_graph([("a", "b"), ("b", "a"), ("b", "b"), ("b", "c")])
    assert g.n_nodes == 3 and g.n_edges == 2
    assert g.build_stats.self_loops_dropped == 1
    assert g.build_stats.duplicates_merged == 1
    assert sorted(g.neighbors("b")) == ["a", "c"]


def test_empty_meta_still_works():
    g = build_graph(path_edges(4), node_meta={})
    assert g.coords == {}
    assert diameter(g) == 3
    assert knn_profile(g).pearson is not None


def test_malformed_pair():
    with pytest.raises(FormatError):
        build_graph([("a",)])


def test_parse_edge_lines_reports_line():
    with pytest.raises(FormatError) as exc:
        list(parse_edge_lines(["# header", "a b", "a b c"]))
    assert "line 3" in str(exc.value)


def test_parse_edge_lines_skips_comments():
    assert list(parse_edge_lines(["# c", "", "x  y", "y\tz"])) == [("x", "y"), ("y", "z")]


def test_file_roundtrip(tmp_path):
    meta = {"a": ((0.0, 0.5), "L1"), "b": ((1.0, 1.25), None)}
    g = build_graph([("a", "b"), ("b", "c")], node_meta=meta)
    write_edge_list(g, tmp_path / "g.edges")
    write_node_meta(g, tmp_path / "g.nodes")
    h = read_graph(tmp_path / "g.edges", tmp_path / "g.nodes")
    assert sorted(h.edges()) == sorted(g.edges())
    assert h.coords["b"] == (1.0, 1.25)
    assert h.labels.get("a") == "L1"


def test_node_meta_bad_float():
    with pytest.raises(FormatError):
        parse_node_meta_lines(["a\tx\t1\tlab"])


def test_bfs_distances():
    g = build_graph([("a", "b"), ("b", "c")])
    assert bfs_distances(g, "a") == {"a": 0, "b": 1, "c": 2}
    s = build_graph(star_edges(5))
    d = bfs_distances(s, "l0")
    assert d["h"] == 1 and all(d[f"l{i}"] == 2 for i in range(1, 4))
    two = build_graph([("a", "b"), ("x", "y")])
    assert set(bfs_distances(two, "a")) == {"a", "b"}
    with pytest.raises(KeyError):
        bfs_distances(g, "zz")


@pytest.mark.parametrize("edges,expected", [
    (cycle_edges(6), 3),
    (star_edges(10), 2),
    (path_edges(16), 15),
])
def test_diameter_examples(edges, expected):
    assert diameter(build_graph(edges)) == expected


def test_diameter_single_node():
    assert diameter(build_graph([], nodes=["solo"])) == 0


def test_diameter_matches_brute_force():
    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(2, 51))
        edges, ids = random_connected_edges(rng, n, float(rng.uniform(0, 0.1)))
        # split off a random chunk now and then to exercise the component rule
        if rng.random() < 0.3:
            edges = [e for e in edges if rng.random() > 0.15]
        g = build_graph(edges, nodes=ids)
        assert diameter(g) == brute_diameter(adjacency(edges, ids))


def test_density_examples():
    assert edge_density(9899, 39083) == pytest.approx(7.98e-4, abs=5e-7)
    assert edge_density(16476, 144909) == pytest.approx(1.068e-3, abs=5e-7)
    assert density(build_graph(complete_edges(5))) == 1.0
    with pytest.raises(DomainError):
        density(build_graph([], nodes=["a"]))


def test_knn_star_and_cycle():
    p = knn_profile(build_graph(star_edges(7)))
    assert p.pearson == pytest.approx(-1.0)
    assert p.distinct_points() == 2
    c = knn_profile(build_graph(cycle_edges(8)))
    assert c.pearson is None and not c.pearson_defined
    with pytest.raises(DomainError):
        knn_profile(build_graph([], nodes=["a", "b"]))


def test_knn_against_hand_computation():
    rng = np.random.default_rng(3)
    edges, ids = random_connected_edges(rng, 30, 0.1)
    adj = adjacency(edges, ids)
    k = [len(adj[v]) for v in ids]
    knn = [sum(len(adj[w]) for w in adj[v]) / len(adj[v]) for v in ids]
    p = knn_profile(build_graph(edges, nodes=ids))
    assert p.pearson == pytest.approx(hand_pearson(k, knn), abs=1e-12)


def test_knn_relabel_invariant():
    rng = np.random.default_rng(11)
    edges, ids = random_connected_edges(rng, 40, 0.08)
    perm = {v: f"z{int(i)}" for v, i in zip(ids, rng.permutation(len(ids)))}
    g1 = build_graph(edges)
    g2 = build_graph([(perm[a], perm[b]) for a, b in edges])
    assert knn_profile(g1).pearson == pytest.approx(knn_profile(g2).pearson, abs=1e-12)


def test_degree_sum_and_readonly():
    g = build_graph(cycle_edges(9) + [("c0", "c4")])
    assert g.degrees().sum() == 2 * g.n_edges
    with pytest.raises(ValueError):
        g.indices[0] = 5


def test_components_largest_first():
    g = build_graph([("a", "b"), ("x", "y"), ("y", "z")], nodes=["q"])
    sizes = [len(c) for c in g.components()]
    assert sizes == [3, 2, 1]
    assert not g.is_connected()
    assert math.isclose(diameter(g), 2)

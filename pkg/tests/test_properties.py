import math

import numpy as np
from hypothesis import HealthCheck, given, settings, strategies as st

from netrenorm.boxcover import box_counts, cover, validate_cover
from netrenorm.community import tf_idf
from netrenorm.graph import build_graph, density, diameter
from netrenorm.renorm import collapse, renormalization_flow
from netrenorm.scaling import Region, epsilon_from_slope, phase_region

from oracles import adjacency, brute_diameter, floyd_warshall

SETTINGS = settings(max_examples=60, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, max_nodes=30, connected=False):
    n = draw(st.integers(2, max_nodes))
    ids = [f"n{i}" for i in range(n)]
    edges = []
    if connected:
        for i in range(1, n):
            edges.append((ids[draw(st.integers(0, i - 1))], ids[i]))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    edges += [(ids[a], ids[b]) for a, b in extra]
    return edges, ids


@SETTINGS
@given(graphs(), st.integers(1, 6), st.integers(0, 1000))
def test_cover_is_valid_partition(data, lb, seed):
    edges, ids = data
    g = build_graph(edges, nodes=ids)
    c = cover(g, lb, rng_seed=seed, restarts=4)
    assert validate_cover(g, c)
    assert sum(c.sizes().values()) == g.n_nodes
    # independent check of the distance rule
    nodes, d = floyd_warshall(adjacency(edges, ids))
    pos = {v: i for i, v in enumerate(nodes)}
    for members in c.boxes().values():
        for a in members:
            for b in members:
                assert d[pos[a], pos[b]] < lb


@SETTINGS
@given(graphs(), st.integers(0, 1000))
def test_series_invariants(data, seed):
    edges, ids = data
    g = build_graph(edges, nodes=ids)
    d = diameter(g)
    s = box_counts(g, max(d + 1, 2), rng_seed=seed, restarts=3)
    n = list(s.n_boxes)
    assert n[0] == g.n_nodes
    assert all(a >= b for a, b in zip(n, n[1:]))
    # beyond every component's diameter there is one box per component
    comps = len(g.components())
    _, dist = floyd_warshall(adjacency(edges, ids))
    big = int(dist[np.isfinite(dist)].max())
    s2 = box_counts(g, max(big + 1, 2), rng_seed=seed, restarts=3)
    assert s2.n_boxes[-1] == comps


@SETTINGS
@given(graphs(connected=True), st.integers(2, 4), st.integers(0, 1000))
def test_collapse_connected_and_counts(data, lb, seed):
    edges, ids = data
    g = build_graph(edges, nodes=ids)
    c = cover(g, lb, rng_seed=seed, restarts=3)
    h = collapse(g, c)
    assert h.n_nodes == c.n_boxes
    assert h.is_connected()
    assert all(a != b for a, b in h.edges())


@SETTINGS
@given(graphs(max_nodes=25, connected=True), st.integers(2, 4), st.integers(0, 100))
def test_flow_contract(data, lb, seed):
    edges, ids = data
    f = renormalization_flow(build_graph(edges, nodes=ids), lb, rng_seed=seed, restarts=2)
    counts = f.node_counts()
    assert all(a > b for a, b in zip(counts, counts[1:]))
    assert counts[-1] == 1 and f.steps <= counts[0] - 1


@SETTINGS
@given(graphs(max_nodes=40))
def test_graph_basic_invariants(data):
    edges, ids = data
    g = build_graph(edges, nodes=ids)
    assert g.degrees().sum() == 2 * g.n_edges
    assert 0.0 <= density(g) <= 1.0
    assert diameter(g) == brute_diameter(adjacency(edges, ids))


@SETTINGS
@given(st.floats(1.05, 5.0), st.floats(-5.0, 5.0))
def test_epsilon_region_consistent(gamma, slope):
    eps = epsilon_from_slope(gamma, slope)
    assert eps == gamma - slope
    r = phase_region(gamma, eps)
    if eps < gamma - 1:
        assert r is Region.I
    elif eps <= 2:
        assert r is Region.II
    else:
        assert r is Region.III


@SETTINGS
@given(st.dictionaries(st.sampled_from("abcdef"),
                       st.dictionaries(st.sampled_from(["x", "y", "z", "w"]), st.integers(0, 9)),
                       min_size=2))
def test_tfidf_properties(table):
    if not any(n > 0 for row in table.values() for n in row.values()):
        return
    t = tf_idf(table)
    assert (t.scores >= 0).all()
    C = len(t.communities)
    for j, w in enumerate(t.websites):
        df = sum(1 for c in table if table[c].get(w, 0) > 0)
        assert math.isclose(t.idf[j], math.log(C / df), abs_tol=1e-15)
        assert (t.idf[j] == 0) == (df == C)

"""Compiled and pure-Python kernels must agree exactly."""
import os
import subprocess
import sys

import numpy as np
import pytest

from netrenorm import _pykernels, kernels
from netrenorm.boxcover import restart_order
from netrenorm.graph import build_graph

from oracles import random_connected_edges

needs_cython = pytest.mark.skipif("cython" not in kernels.available_backends(),
                                  reason="compiled kernels not built")


def _graph(seed, n=150, p=0.02):
    rng = np.random.default_rng(seed)
    edges, ids = random_connected_edges(rng, n, p)
    return build_graph(edges, nodes=ids)


def test_env_switch_selects_python():
    code = "from netrenorm import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, NETRENORM_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@needs_cython
@pytest.mark.parametrize("seed", range(4))
def test_bfs_parity(seed):
    from netrenorm import _ckernels as ck
    g = _graph(seed)
    for s in (0, 7, 33):
        for depth in (-1, 1, 3):
            a = ck.bfs_hops(g.indptr, g.indices, s, depth)
            b = _pykernels.bfs_hops(g.indptr, g.indices, s, depth)
            assert np.array_equal(a, b)
    src = np.arange(g.n_nodes, dtype=np.int64)
    assert np.array_equal(ck.eccentricities(g.indptr, g.indices, src),
                          _pykernels.eccentricities(g.indptr, g.indices, src))
    assert np.array_equal(ck.all_pairs_hops(g.indptr, g.indices),
                          _pykernels.all_pairs_hops(g.indptr, g.indices))


@needs_cython
@pytest.mark.parametrize("seed", range(4))
def test_coloring_parity(seed):
    from netrenorm import _ckernels as ck
    g = _graph(seed)
    dist = ck.all_pairs_hops(g.indptr, g.indices)
    for lb in (2, 3, 4, 6):
        for r in range(3):
            order = np.ascontiguousarray(restart_order(g, r, seed), dtype=np.int64)
            ref = _pykernels.greedy_box_colors(g.indptr, g.indices, order, lb)
            assert np.array_equal(ck.greedy_box_colors(g.indptr, g.indices, order, lb), ref)
            assert np.array_equal(ck.greedy_box_colors_dm(dist, order, lb), ref)
            assert np.array_equal(_pykernels.greedy_box_colors_dm(dist, order, lb), ref)


@needs_cython
@pytest.mark.parametrize("rule", ["all", "max", "min"])
def test_growth_parity(rule):
    from netrenorm.geomodel import GeoModelConfig, grow
    from netrenorm import _ckernels as ck
    cfg = GeoModelConfig(400, rule, radius=0.03, rng_seed=21)
    a = grow(cfg, kernel=ck.grow_batch)
    b = grow(cfg, kernel=_pykernels.grow_batch)
    assert a.graph.edges() == b.graph.edges()
    assert a.graph.coords == b.graph.coords
    assert a.growth_log == b.growth_log

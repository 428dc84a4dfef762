"""Compiled vs pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--n 1500] [--repeat 3]

Prints one row per kernel with the best wall time of each backend and the
speed-up. Results are checked for equality before timing is reported.
"""
import argparse
import time

import numpy as np

from netrenorm import _pykernels, kernels
from netrenorm.boxcover import restart_order
from netrenorm.geomodel import GeoModelConfig, grow
from netrenorm.graph import build_graph


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1500, help="nodes in the test graph")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if "cython" not in kernels.available_backends():
        raise SystemExit("compiled kernels not built; run pip install -e . first")
    from netrenorm import _ckernels as ck

    g = grow(GeoModelConfig(args.n, "min", radius=0.02, rng_seed=args.seed)).graph
    ip, ix = g.indptr, g.indices
    order = np.ascontiguousarray(restart_order(g, 1, args.seed), dtype=np.int64)
    dist = ck.all_pairs_hops(ip, ix)
    srcs = np.arange(min(g.n_nodes, 200), dtype=np.int64)
    grow_cfg = GeoModelConfig(args.n, "max", radius=0.02, rng_seed=args.seed)

    cases = [
        ("bfs_hops (full)", lambda m: m.bfs_hops(ip, ix, 0, -1)),
        ("eccentricities x200", lambda m: m.eccentricities(ip, ix, srcs)),
        ("greedy_box_colors lB=3", lambda m: m.greedy_box_colors(ip, ix, order, 3)),
        ("greedy_box_colors lB=8", lambda m: m.greedy_box_colors(ip, ix, order, 8)),
        ("greedy_box_colors_dm lB=8", lambda m: m.greedy_box_colors_dm(dist, order, 8)),
        ("all_pairs_hops", lambda m: m.all_pairs_hops(ip, ix)),
        ("growth (max rule)", lambda m: grow(grow_cfg, kernel=m.grow_batch).graph.edges()),
    ]
    print(f"graph: {g.n_nodes} nodes, {g.n_edges} edges; best of {args.repeat}")
    print(f"{'kernel':28s} {'cython s':>10s} {'python s':>10s} {'speed-up':>9s}")
    for name, fn in cases:
        tc, rc = best_of(lambda: fn(ck), args.repeat)
        tp, rp = best_of(lambda: fn(_pykernels), max(1, args.repeat // 3))
        if not same(rc, rp):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:28s} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()

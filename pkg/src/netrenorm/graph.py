"""Immutable undirected simple graphs and the basic metrics built on them."""
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from . import kernels
from .errors import DomainError, FormatError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BuildStats:
    self_loops_dropped: int = 0
    duplicates_merged: int = 0


class Graph:
    """Undirected, unweighted simple graph over string node ids.

    Stored in CSR form: the neighbors of node index ``i`` are
    ``indices[indptr[i]:indptr[i + 1]]`` (sorted). ``ids[i]`` is the public id.
    Instances are treated as immutable; the arrays are flagged read-only.
    """

    __slots__ = ("ids", "index", "indptr", "indices", "coords", "labels", "build_stats")

    def __init__(self, ids, indptr, indices, coords=None, labels=None, build_stats=None):
        self.ids = tuple(ids)
        self.index = {v: i for i, v in enumerate(self.ids)}
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False
        self.coords = dict(coords or {})
        self.labels = dict(labels or {})
        self.build_stats = build_stats or BuildStats()

    @classmethod
    def from_index_edges(cls, ids, src, dst, coords=None, labels=None):
        """Build from integer endpoint arrays; loops and duplicates are removed."""
        n = len(ids)
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        keep = src != dst
        loops = int((~keep).sum())
        a = np.minimum(src[keep], dst[keep])
        b = np.maximum(src[keep], dst[keep])
        if len(a):
            key = np.unique(a * n + b)
            a, b = key // n, key % n
        merged = int(keep.sum()) - len(a)
        both_src = np.concatenate([a, b])
        both_dst = np.concatenate([b, a])
        order = np.lexsort((both_dst, both_src))
        indices = both_dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(both_src, minlength=n), out=indptr[1:])
        return cls(ids, indptr, indices, coords, labels, BuildStats(loops, merged))

    @property
    def n_nodes(self):
        return len(self.ids)

    @property
    def n_edges(self):
        return len(self.indices) // 2

    def __len__(self):
        return len(self.ids)

    def __repr__(self):
        return f"Graph(n_nodes={self.n_nodes}, n_edges={self.n_edges})"

    def degrees(self):
        return np.diff(self.indptr)

    def neighbors(self, node):
        i = self._idx(node)
        return [self.ids[j] for j in self.indices[self.indptr[i]:self.indptr[i + 1]]]

    def edges(self):
        """Edges as (id, id) pairs, each once, in index order."""
        src = np.repeat(np.arange(self.n_nodes), self.degrees())
        mask = src < self.indices
        return [(self.ids[a], self.ids[b]) for a, b in zip(src[mask], self.indices[mask])]

    def edge_index_arrays(self):
        src = np.repeat(np.arange(self.n_nodes), self.degrees())
        mask = src < self.indices
        return src[mask], self.indices[mask]

    def _idx(self, node):
        try:
            return self.index[node]
        except KeyError:
            raise KeyError(f"unknown node {node!r}") from None

    def components(self):
        """Connected components as arrays of node indices, largest first."""
        n = self.n_nodes
        label = np.full(n, -1, dtype=np.int64)
        comps = []
        for s in range(n):
            if label[s] >= 0:
                continue
            reached = np.flatnonzero(kernels.bfs_hops(self.indptr, self.indices, s) >= 0)
            label[reached] = len(comps)
            comps.append(reached)
        comps.sort(key=lambda c: (-len(c), c[0]))
        return comps

    def is_connected(self):
        if self.n_nodes == 0:
            return False
        return bool((kernels.bfs_hops(self.indptr, self.indices, 0) >= 0).all())

    def subgraph(self, node_indices):
        keep = np.sort(np.asarray(node_indices, dtype=np.int64))
        remap = np.full(self.n_nodes, -1, dtype=np.int64)
        remap[keep] = np.arange(len(keep))
        src, dst = self.edge_index_arrays()
        mask = (remap[src] >= 0) & (remap[dst] >= 0)
        ids = [self.ids[i] for i in keep]
        coords = {v: self.coords[v] for v in ids if v in self.coords}
        labels = {v: self.labels[v] for v in ids if v in self.labels}
        return Graph.from_index_edges(ids, remap[src[mask]], remap[dst[mask]], coords, labels)


def build_graph(edges, node_meta=None, nodes=()):
    """Build a :class:`Graph` from id pairs.

    Self-loops are dropped and parallel edges merged; the counts land in
    ``graph.build_stats``. ``node_meta`` maps id -> (coord or None, label or
    None). Extra ``nodes`` become isolated vertices if they carry no edge.
    """
    ids = {}
    src, dst = [], []
    for k, pair in enumerate(edges, 1):
        try:
            a, b = pair
        except (TypeError, ValueError):
            raise FormatError(f"malformed edge {pair!r}", line=k) from None
        if not isinstance(a, str) or not isinstance(b, str) or not a or not b:
            raise FormatError(f"node ids must be non-empty strings, got {pair!r}", line=k)
        src.append(ids.setdefault(a, len(ids)))
        dst.append(ids.setdefault(b, len(ids)))
    for v in nodes:
        ids.setdefault(v, len(ids))
    if not ids:
        raise DomainError("cannot build a graph from an empty edge list")
    coords, labels = {}, {}
    for v, (xy, label) in (node_meta or {}).items():
        if v not in ids:
            continue
        if xy is not None:
            coords[v] = (float(xy[0]), float(xy[1]))
        if label is not None:
            labels[v] = label
    g = Graph.from_index_edges(list(ids), src, dst, coords, labels)
    st = g.build_stats
    if st.self_loops_dropped or st.duplicates_merged:
        log.info("build_graph: dropped %d self-loops, merged %d duplicate edges",
                 st.self_loops_dropped, st.duplicates_merged)
    return g


def parse_edge_lines(lines):
    """Yield id pairs from edge-list text; ``#`` lines and blanks are skipped."""
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"expected two node ids, got {line!r}", line=lineno)
        yield parts[0], parts[1]


def parse_node_meta_lines(lines):
    """Parse ``id<TAB>x<TAB>y<TAB>label`` rows; x, y and label may be empty."""
    meta = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 1 or len(parts) > 4 or not parts[0]:
            raise FormatError(f"bad node metadata row {line!r}", line=lineno)
        parts += [""] * (4 - len(parts))
        node, x, y, label = parts
        xy = None
        if x or y:
            try:
                xy = (float(x), float(y))
            except ValueError:
                raise FormatError(f"bad coordinate in {line!r}", line=lineno) from None
        meta[node] = (xy, label or None)
    return meta


def read_graph(edge_path, meta_path=None):
    with open(edge_path, encoding="utf-8") as fh:
        pairs = list(parse_edge_lines(fh))
    meta = None
    if meta_path is not None:
        with open(meta_path, encoding="utf-8") as fh:
            meta = parse_node_meta_lines(fh)
    return build_graph(pairs, meta)


def write_edge_list(g, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for a, b in g.edges():
            fh.write(f"{a} {b}\n")


def write_node_meta(g, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for v in g.ids:
            xy = g.coords.get(v)
            x, y = (repr(xy[0]), repr(xy[1])) if xy else ("", "")
            fh.write(f"{v}\t{x}\t{y}\t{g.labels.get(v, '')}\n")


def bfs_distances(g, source):
    """Hop counts from ``source`` to every reachable node."""
    s = g._idx(source)
    dist = kernels.bfs_hops(g.indptr, g.indices, s)
    return {g.ids[i]: int(d) for i, d in enumerate(dist) if d >= 0}


def diameter(g):
    """Largest eccentricity within the largest connected component.

    Several equally large components: the maximum over all of them, so the
    result does not depend on node labels.
    """
    if g.n_nodes == 0:
        raise DomainError("diameter of an empty graph")
    comps = g.components()
    top = [c for c in comps if len(c) == len(comps[0])]
    src = np.ascontiguousarray(np.concatenate(top))
    return int(kernels.eccentricities(g.indptr, g.indices, src).max())


def density(g):
    n = g.n_nodes
    if n < 2:
        raise DomainError("density needs at least 2 nodes")
    return edge_density(n, g.n_edges)


def edge_density(n_nodes, n_edges):
    """E / (N (N - 1) / 2)."""
    if n_nodes < 2:
        raise DomainError("density needs at least 2 nodes")
    return n_edges / (n_nodes * (n_nodes - 1) / 2)


@dataclass
class KnnProfile:
    """Node-level (k, k_nn) pairs plus their Pearson correlation.

    ``pearson`` is None when either coordinate has zero variance.
    """

    nodes: list
    k: np.ndarray
    knn: np.ndarray
    pearson: float | None
    binned_curve: list = field(default_factory=list)

    @property
    def pearson_defined(self):
        return self.pearson is not None

    def distinct_points(self):
        return len(set(zip(self.k.tolist(), self.knn.tolist())))


def pearson(x, y):
    """Pearson r, or None when either input is constant or too short."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2:
        return None
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if np.ptp(x) == 0 or np.ptp(y) == 0 or sxx == 0 or syy == 0:
        return None
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def knn_profile(g):
    deg = g.degrees()
    active = np.flatnonzero(deg > 0)
    if len(active) < 2:
        raise DomainError("knn_profile needs at least 2 non-isolated nodes")
    src = np.repeat(np.arange(g.n_nodes), deg)
    nbr_deg_sum = np.bincount(src, weights=deg[g.indices], minlength=g.n_nodes)
    k = deg[active]
    knn = nbr_deg_sum[active] / k
    curve = []
    for kv in np.unique(k):
        curve.append((int(kv), float(knn[k == kv].mean())))
    return KnnProfile([g.ids[i] for i in active], k, knn, pearson(k, knn), curve)

"""Box covering by greedy coloring of the distance conflict graph.

Two nodes may share a box only if their hop distance is strictly below the
box length ``l_B``. Nodes are colored greedily in some visiting order: a node
joins the lowest-numbered box whose members all lie within ``l_B - 1`` hops,
otherwise it opens a new box. The result is valid by construction; the
visiting order only affects how many boxes come out, so several orders are
tried and the smallest cover kept.

Orders cycle through three strategies per restart:

* restart 0: depth-first preorder from a pseudo-peripheral node (exact on
  paths and cycles),
* odd restarts: a uniformly random permutation,
* other even restarts: depth-first preorder from a random root with
  shuffled neighbor lists.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import csv

import numpy as np

from . import kernels
from .errors import DomainError


@dataclass(frozen=True)
class BoxCover:
    l_B: int
    assignment: dict
    n_boxes: int

    def boxes(self):
        """Box id -> list of member ids (in assignment order)."""
        out = {}
        for v, b in self.assignment.items():
            out.setdefault(b, []).append(v)
        return out

    def sizes(self):
        return {b: len(m) for b, m in self.boxes().items()}


@dataclass(frozen=True)
class BoxCountSeries:
    entries: tuple
    n_nodes: int
    n_components: int = 1

    @property
    def l_B(self):
        return np.array([e[0] for e in self.entries])

    @property
    def n_boxes(self):
        return np.array([e[1] for e in self.entries])

    def as_dict(self):
        return dict(self.entries)


@dataclass(frozen=True)
class CoverCheck:
    ok: bool
    message: str = ""
    pair: tuple | None = None
    distance: int | None = None

    def __bool__(self):
        return self.ok


def _dfs_order(g, root, rng=None):
    n = g.n_nodes
    ip, ix = g.indptr, g.indices
    seen = np.zeros(n, dtype=bool)
    order = []
    roots = [root] + [v for v in range(n) if v != root]
    for r in roots:
        if seen[r]:
            continue
        stack = [r]
        while stack:
            u = stack.pop()
            if seen[u]:
                continue
            seen[u] = True
            order.append(u)
            nb = ix[ip[u]:ip[u + 1]]
            if rng is not None:
                nb = nb[rng.permutation(len(nb))]
            else:
                nb = nb[::-1]
            stack.extend(int(w) for w in nb if not seen[w])
    return np.asarray(order, dtype=np.int64)


def _peripheral_node(g):
    """Endpoint of a double BFS sweep from node 0 (lowest index on ties)."""
    d = kernels.bfs_hops(g.indptr, g.indices, 0)
    a = int(np.argmax(d))
    d = kernels.bfs_hops(g.indptr, g.indices, a)
    return int(np.argmax(d))


def restart_order(g, restart, rng_seed):
    """Visiting order used by a given restart; fixed by (rng_seed, restart)."""
    if restart == 0:
        return _dfs_order(g, _peripheral_node(g))
    rng = np.random.default_rng([rng_seed, restart])
    if restart % 2 == 1:
        return rng.permutation(g.n_nodes).astype(np.int64)
    return _dfs_order(g, int(rng.integers(g.n_nodes)), rng)


def _colors_to_cover(g, lb, colors):
    # renumber boxes by first appearance in node order for stable ids
    _, first = np.unique(colors, return_index=True)
    rank = np.empty(colors.max() + 1, dtype=np.int64)
    rank[colors[np.sort(first)]] = np.arange(len(first))
    boxes = rank[colors]
    return BoxCover(lb, {v: int(b) for v, b in zip(g.ids, boxes)}, len(first))


# Dense distance matrices are used up to this many nodes (int16: 2 bytes/pair).
MATRIX_MAX_NODES = 12_000
# Mean ball size above which the matrix kernel beats per-node truncated BFS.
MATRIX_BALL_THRESHOLD = 64


class Coverer:
    """Greedy box covering of one graph with cached orders and distances.

    Restart orders depend only on ``(rng_seed, restart)`` and are reused
    across box lengths. For graphs up to ``MATRIX_MAX_NODES`` nodes a dense
    hop matrix is built on first need; large box lengths are then colored
    against the matrix instead of by repeated BFS. Both kernels implement
    the same greedy rule and return identical colorings.
    """

    def __init__(self, g, rng_seed=0, threads=1, use_matrix=None):
        if g.n_nodes == 0:
            raise DomainError("cannot cover an empty graph")
        self.g = g
        self.rng_seed = rng_seed
        self.threads = max(int(threads), 1)
        if use_matrix is None:
            use_matrix = g.n_nodes <= MATRIX_MAX_NODES
        self.use_matrix = use_matrix
        self._orders = {}
        self._dist = None
        self._ball_mean = None

    @property
    def dist(self):
        if self._dist is None:
            self._dist = kernels.all_pairs_hops(self.g.indptr, self.g.indices)
        return self._dist

    def mean_ball(self, l_B):
        """Mean number of nodes within l_B - 1 hops (self included)."""
        if self._ball_mean is None:
            hist = np.bincount(self.dist[self.dist >= 0].ravel().astype(np.int64))
            self._ball_mean = np.cumsum(hist) / self.g.n_nodes
        idx = min(l_B - 1, len(self._ball_mean) - 1)
        return float(self._ball_mean[idx])

    def order(self, i):
        if i not in self._orders:
            self._orders[i] = restart_order(self.g, i, self.rng_seed)
        return self._orders[i]

    def _kernel(self, l_B):
        g = self.g
        if self.use_matrix and self._likely_dense(l_B):
            dist = self.dist
            return lambda order: kernels.greedy_box_colors_dm(dist, order, l_B)
        return lambda order: kernels.greedy_box_colors(g.indptr, g.indices, order, l_B)

    def _likely_dense(self, l_B):
        if self._dist is not None:
            return self.mean_ball(l_B) > MATRIX_BALL_THRESHOLD
        # probe a few truncated BFS balls before paying for the matrix
        g = self.g
        probes = np.linspace(0, g.n_nodes - 1, num=min(16, g.n_nodes)).astype(np.int64)
        sizes = [(kernels.bfs_hops(g.indptr, g.indices, int(p), l_B - 1) >= 0).sum()
                 for p in probes]
        return float(np.mean(sizes)) > MATRIX_BALL_THRESHOLD

    def colors(self, l_B, restarts=20):
        """Best coloring (node-index -> box) over ``restarts`` orders."""
        if l_B < 1:
            raise DomainError("l_B must be >= 1")
        if l_B == 1:
            return np.arange(self.g.n_nodes, dtype=np.int64)
        restarts = max(int(restarts), 1)
        orders = [self.order(i) for i in range(restarts)]
        run = self._kernel(l_B)
        if self.threads > 1 and restarts > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                results = list(pool.map(run, orders))
        else:
            results = map(run, orders)
        best, best_n = None, None
        for colors in results:
            k = int(colors.max()) + 1
            if best is None or k < best_n:
                best, best_n = colors, k
        return best

    def cover(self, l_B, restarts=20):
        return _colors_to_cover(self.g, l_B, self.colors(l_B, restarts))

    def box_counts(self, l_B_max, restarts=20):
        """N(l_B) for l_B = 1..l_B_max.

        A cover valid at l_B stays valid at l_B + 1, so the running best is
        carried forward and the series is non-increasing. Once every
        component fits in one box the remaining entries are filled without
        covering.
        """
        if l_B_max < 2:
            raise DomainError("l_B_max must be >= 2")
        g = self.g
        n_comp = len(g.components())
        entries = [(1, g.n_nodes)]
        best = g.n_nodes
        for lb in range(2, l_B_max + 1):
            if best > n_comp:
                best = min(best, int(self.colors(lb, restarts).max()) + 1)
            entries.append((lb, best))
        return BoxCountSeries(tuple(entries), g.n_nodes, n_comp)


def cover(g, l_B, rng_seed=0, restarts=20, threads=1):
    """Cover ``g`` with boxes of length ``l_B``; smallest of ``restarts`` runs."""
    return Coverer(g, rng_seed, threads).cover(l_B, restarts)


def box_counts(g, l_B_max, rng_seed=0, restarts=20, threads=1):
    """N(l_B) series for l_B = 1..l_B_max; see :meth:`Coverer.box_counts`."""
    return Coverer(g, rng_seed, threads).box_counts(l_B_max, restarts)


def validate_cover(g, c):
    """Check a cover against ``g``; returns a falsy :class:`CoverCheck` on violation."""
    if set(c.assignment) != set(g.ids):
        raise DomainError("cover assignment does not match the graph's node set")
    if len(set(c.assignment.values())) != c.n_boxes:
        return CoverCheck(False, f"n_boxes={c.n_boxes} but "
                                 f"{len(set(c.assignment.values()))} distinct box ids")
    box_of = np.array([c.assignment[v] for v in g.ids])
    depth = max(c.l_B - 1, 0)
    members = {}
    for i, b in enumerate(box_of):
        members.setdefault(int(b), []).append(i)
    for b, mem in members.items():
        if len(mem) < 2:
            continue
        for i in mem:
            dist = kernels.bfs_hops(g.indptr, g.indices, i, depth)
            bad = [j for j in mem if dist[j] < 0]
            if bad:
                j = bad[0]
                full = kernels.bfs_hops(g.indptr, g.indices, i)[j]
                d = int(full) if full >= 0 else None
                pair = (g.ids[i], g.ids[j])
                shown = "inf" if d is None else d
                return CoverCheck(False, f"box {b}: nodes {pair[0]!r} and {pair[1]!r} "
                                         f"are {shown} hops apart (l_B={c.l_B})", pair, d)
    return CoverCheck(True)


def write_series_csv(series, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["l_B", "N_boxes"])
        w.writerows(series.entries)


def read_series_csv(path):
    from .errors import FormatError
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [h.strip() for h in rows[0]] != ["l_B", "N_boxes"]:
        raise FormatError("expected header 'l_B,N_boxes'", line=1)
    entries = []
    for k, row in enumerate(rows[1:], 2):
        try:
            entries.append((int(row[0]), int(row[1])))
        except (ValueError, IndexError):
            raise FormatError(f"bad row {row!r}", line=k) from None
    n = entries[0][1] if entries and entries[0][0] == 1 else max((e[1] for e in entries), default=0)
    return BoxCountSeries(tuple(entries), n)


def write_cover_csv(c, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["node_id", "box_id"])
        for v, b in c.assignment.items():
            w.writerow([v, b])

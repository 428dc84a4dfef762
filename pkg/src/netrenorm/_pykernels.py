"""Pure-Python reference kernels.

Mirrors ``_ckernels.pyx`` function for function; both must return identical
arrays for identical inputs. Graphs arrive in CSR form (``indptr``,
``indices``, both int64).
"""
from collections import deque

import numpy as np

RULE_ALL = 0
RULE_MAX = 1
RULE_MIN = 2


def bfs_hops(indptr, indices, source, max_depth=-1):
    """Hop distances from ``source``; -1 marks unreachable (or beyond max_depth)."""
    n = len(indptr) - 1
    ip = indptr.tolist()
    ix = indices.tolist()
    dist = [-1] * n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if max_depth >= 0 and du >= max_depth:
            continue
        for j in range(ip[u], ip[u + 1]):
            w = ix[j]
            if dist[w] < 0:
                dist[w] = du + 1
                queue.append(w)
    return np.asarray(dist, dtype=np.int64)


def eccentricities(indptr, indices, sources):
    """Largest finite BFS distance from each source."""
    n = len(indptr) - 1
    ip = indptr.tolist()
    ix = indices.tolist()
    out = np.zeros(len(sources), dtype=np.int64)
    for i, s in enumerate(sources):
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        far = 0
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for j in range(ip[u], ip[u + 1]):
                w = ix[j]
                if dist[w] < 0:
                    dist[w] = du
                    far = du
                    queue.append(w)
        out[i] = far
    return out


def _ball(ip, ix, v, depth, n):
    seen = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        du = seen[u]
        if du >= depth:
            continue
        for j in range(ip[u], ip[u + 1]):
            w = ix[j]
            if w not in seen:
                seen[w] = du + 1
                queue.append(w)
    return seen


def greedy_box_colors(indptr, indices, order, lb):
    """Greedy coloring of the distance->=lb conflict graph.

    Nodes are visited in ``order``; each takes the smallest existing color
    whose members all lie within lb-1 hops, else a fresh one.
    """
    n = len(indptr) - 1
    ip = indptr.tolist()
    ix = indices.tolist()
    colors = [-1] * n
    sizes = []
    depth = lb - 1
    for v in order.tolist():
        best = -1
        if depth > 0:
            counts = {}
            for u in _ball(ip, ix, v, depth, n):
                c = colors[u]
                if c >= 0:
                    counts[c] = counts.get(c, 0) + 1
            for c, cnt in counts.items():
                if cnt == sizes[c] and (best < 0 or c < best):
                    best = c
        if best < 0:
            best = len(sizes)
            sizes.append(0)
        colors[v] = best
        sizes[best] += 1
    return np.asarray(colors, dtype=np.int64)


def grow_batch(cand, xs, ys, deg, cell_head, next_node, nbr_ptr, nbr, born, state,
               radius, arena, rule, target, max_rej):
    """Feed candidate points into a spatial growth run.

    ``cand`` rows are (x, y, tie_u) with x, y in [0, 1) scaled by ``arena``.
    ``state`` = [n_nodes, n_links, consecutive_rejections, steps, total_rejections]
    is updated in place; node i's attachments are ``nbr[nbr_ptr[i]:nbr_ptr[i+1]]``
    and ``born[i]`` is the (1-based) step that accepted it.
    Returns the number of candidate rows consumed. Stops early when the
    target is met, the rejection limit is hit, or ``nbr`` may overflow.
    """
    gside = int(np.ceil(arena / radius))
    r2 = radius * radius
    cap = len(nbr)
    consumed = 0
    for row in range(cand.shape[0]):
        n = int(state[0])
        if n >= target or state[2] >= max_rej:
            break
        if int(state[1]) + n > cap:
            break
        consumed += 1
        state[3] += 1
        px = cand[row, 0] * arena
        py = cand[row, 1] * arena
        cx = min(int(px / radius), gside - 1)
        cy = min(int(py / radius), gside - 1)
        found = []
        for gx in range(max(cx - 1, 0), min(cx + 2, gside)):
            for gy in range(max(cy - 1, 0), min(cy + 2, gside)):
                q = int(cell_head[gx * gside + gy])
                while q >= 0:
                    dx = xs[q] - px
                    dy = ys[q] - py
                    if dx * dx + dy * dy <= r2:
                        found.append(q)
                    q = int(next_node[q])
        if not found:
            state[2] += 1
            state[4] += 1
            continue
        found.sort()
        if rule == RULE_ALL:
            chosen = found
        else:
            degs = [deg[q] for q in found]
            target_deg = max(degs) if rule == RULE_MAX else min(degs)
            ties = [q for q, d in zip(found, degs) if d == target_deg]
            pick = min(int(cand[row, 2] * len(ties)), len(ties) - 1)
            chosen = [ties[pick]]
        links = int(state[1])
        for q in chosen:
            nbr[links] = q
            links += 1
            deg[q] += 1
        xs[n] = px
        ys[n] = py
        deg[n] = len(chosen)
        nbr_ptr[n + 1] = links
        born[n] = state[3]
        cell = cx * gside + cy
        next_node[n] = cell_head[cell]
        cell_head[cell] = n
        state[0] = n + 1
        state[1] = links
        state[2] = 0
    return consumed


def all_pairs_hops(indptr, indices):
    """Dense hop-distance matrix (int16, -1 = unreachable)."""
    n = len(indptr) - 1
    out = np.full((n, n), -1, dtype=np.int16)
    for s in range(n):
        out[s] = bfs_hops(indptr, indices, s)
    return out


def greedy_box_colors_dm(dist, order, lb):
    """Same coloring as :func:`greedy_box_colors`, checked against a distance matrix."""
    n = dist.shape[0]
    colors = np.full(n, -1, dtype=np.int64)
    classes = []
    for v in order.tolist():
        best = -1
        if lb > 1:
            row = dist[v]
            for c, members in enumerate(classes):
                d = row[members]
                if d.min() >= 0 and d.max() < lb:
                    best = c
                    break
        if best < 0:
            best = len(classes)
            classes.append([])
        classes[best].append(v)
        colors[v] = best
    return colors

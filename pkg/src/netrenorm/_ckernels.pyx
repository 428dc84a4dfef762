# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free, qsort
from libc.math cimport ceil

ctypedef cnp.int64_t i64

cdef int RULE_ALL = 0
cdef int RULE_MAX = 1
cdef int RULE_MIN = 2


cdef int _cmp_i64(const void* a, const void* b) noexcept nogil:
    cdef i64 x = (<i64*>a)[0]
    cdef i64 y = (<i64*>b)[0]
    return (x > y) - (x < y)


def bfs_hops(const i64[::1] indptr, const i64[::1] indices, i64 source, i64 max_depth=-1):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] dist = out
    cdef i64[::1] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t head = 0, tail = 0
    cdef i64 u, w, du, j
    with nogil:
        dist[source] = 0
        queue[tail] = source
        tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            if max_depth >= 0 and du >= max_depth:
                continue
            for j in range(indptr[u], indptr[u + 1]):
                w = indices[j]
                if dist[w] < 0:
                    dist[w] = du + 1
                    queue[tail] = w
                    tail += 1
    return out


def eccentricities(const i64[::1] indptr, const i64[::1] indices, const i64[::1] sources):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t m = sources.shape[0]
    out = np.zeros(m, dtype=np.int64)
    cdef i64[::1] ecc = out
    cdef i64[::1] dist = np.empty(max(n, 1), dtype=np.int64)
    cdef i64[::1] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t i, head, tail, k
    cdef i64 s, u, w, du, j, far
    with nogil:
        for i in range(m):
            for k in range(n):
                dist[k] = -1
            s = sources[i]
            dist[s] = 0
            queue[0] = s
            head = 0
            tail = 1
            far = 0
            while head < tail:
                u = queue[head]
                head += 1
                du = dist[u] + 1
                for j in range(indptr[u], indptr[u + 1]):
                    w = indices[j]
                    if dist[w] < 0:
                        dist[w] = du
                        far = du
                        queue[tail] = w
                        tail += 1
            ecc[i] = far
    return out


def greedy_box_colors(const i64[::1] indptr, const i64[::1] indices, const i64[::1] order, i64 lb):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] colors = out
    cdef i64[::1] sizes = np.zeros(max(n, 1), dtype=np.int64)
    cdef i64[::1] counts = np.zeros(max(n, 1), dtype=np.int64)
    cdef i64[::1] touched = np.empty(max(n, 1), dtype=np.int64)
    cdef i64[::1] stamp = np.full(max(n, 1), -1, dtype=np.int64)
    cdef i64[::1] dist = np.zeros(max(n, 1), dtype=np.int64)
    cdef i64[::1] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef i64 depth = lb - 1
    cdef i64 ncolors = 0
    cdef Py_ssize_t t, head, tail, ntouched, k
    cdef i64 v, u, w, j, c, best
    with nogil:
        for t in range(order.shape[0]):
            v = order[t]
            best = -1
            if depth > 0:
                ntouched = 0
                stamp[v] = t
                dist[v] = 0
                queue[0] = v
                head = 0
                tail = 1
                while head < tail:
                    u = queue[head]
                    head += 1
                    c = colors[u]
                    if c >= 0:
                        if counts[c] == 0:
                            touched[ntouched] = c
                            ntouched += 1
                        counts[c] += 1
                    if dist[u] >= depth:
                        continue
                    for j in range(indptr[u], indptr[u + 1]):
                        w = indices[j]
                        if stamp[w] != t:
                            stamp[w] = t
                            dist[w] = dist[u] + 1
                            queue[tail] = w
                            tail += 1
                for k in range(ntouched):
                    c = touched[k]
                    if counts[c] == sizes[c] and (best < 0 or c < best):
                        best = c
                    counts[c] = 0
            if best < 0:
                best = ncolors
                ncolors += 1
            colors[v] = best
            sizes[best] += 1
    return out


def grow_batch(const double[:, ::1] cand, double[::1] xs, double[::1] ys, i64[::1] deg,
               i64[::1] cell_head, i64[::1] next_node, i64[::1] nbr_ptr, i64[::1] nbr, i64[::1] born,
               i64[::1] state, double radius, double arena, int rule, i64 target, i64 max_rej):
    cdef i64 gside = <i64>ceil(arena / radius)
    cdef double r2 = radius * radius
    cdef i64 cap = nbr.shape[0]
    cdef Py_ssize_t consumed = 0, row
    cdef i64 n, cx, cy, gx, gy, q, nfound, k, best_deg, nties, pick, links, cell
    cdef double px, py, dx, dy
    cdef i64* found = <i64*>malloc(max(target, 1) * sizeof(i64))
    cdef i64* ties = <i64*>malloc(max(target, 1) * sizeof(i64))
    if found == NULL or ties == NULL:
        free(found)
        free(ties)
        raise MemoryError()
    try:
        with nogil:
            for row in range(cand.shape[0]):
                n = state[0]
                if n >= target or state[2] >= max_rej:
                    break
                if state[1] + n > cap:
                    break
                consumed += 1
                state[3] += 1
                px = cand[row, 0] * arena
                py = cand[row, 1] * arena
                cx = <i64>(px / radius)
                if cx > gside - 1:
                    cx = gside - 1
                cy = <i64>(py / radius)
                if cy > gside - 1:
                    cy = gside - 1
                nfound = 0
                for gx in range(cx - 1 if cx > 0 else 0, cx + 2 if cx + 2 < gside else gside):
                    for gy in range(cy - 1 if cy > 0 else 0, cy + 2 if cy + 2 < gside else gside):
                        q = cell_head[gx * gside + gy]
                        while q >= 0:
                            dx = xs[q] - px
                            dy = ys[q] - py
                            if dx * dx + dy * dy <= r2:
                                found[nfound] = q
                                nfound += 1
                            q = next_node[q]
                if nfound == 0:
                    state[2] += 1
                    state[4] += 1
                    continue
                qsort(found, nfound, sizeof(i64), _cmp_i64)
                links = state[1]
                if rule == RULE_ALL:
                    for k in range(nfound):
                        nbr[links] = found[k]
                        links += 1
                        deg[found[k]] += 1
                    deg[n] = nfound
                else:
                    best_deg = deg[found[0]]
                    for k in range(1, nfound):
                        if (rule == RULE_MAX and deg[found[k]] > best_deg) or \
                           (rule == RULE_MIN and deg[found[k]] < best_deg):
                            best_deg = deg[found[k]]
                    nties = 0
                    for k in range(nfound):
                        if deg[found[k]] == best_deg:
                            ties[nties] = found[k]
                            nties += 1
                    pick = <i64>(cand[row, 2] * nties)
                    if pick > nties - 1:
                        pick = nties - 1
                    q = ties[pick]
                    nbr[links] = q
                    links += 1
                    deg[q] += 1
                    deg[n] = 1
                xs[n] = px
                ys[n] = py
                nbr_ptr[n + 1] = links
                born[n] = state[3]
                cell = cx * gside + cy
                next_node[n] = cell_head[cell]
                cell_head[cell] = n
                state[0] = n + 1
                state[1] = links
                state[2] = 0
    finally:
        free(found)
        free(ties)
    return consumed


def all_pairs_hops(const i64[::1] indptr, const i64[::1] indices):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out = np.full((n, n), -1, dtype=np.int16)
    cdef cnp.int16_t[:, ::1] dist = out
    cdef i64[::1] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t s, head, tail
    cdef i64 u, w, j
    cdef cnp.int16_t du
    with nogil:
        for s in range(n):
            dist[s, s] = 0
            queue[0] = s
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                du = dist[s, u] + 1
                for j in range(indptr[u], indptr[u + 1]):
                    w = indices[j]
                    if dist[s, w] < 0:
                        dist[s, w] = du
                        queue[tail] = w
                        tail += 1
    return out


def greedy_box_colors_dm(const cnp.int16_t[:, ::1] dist, const i64[::1] order, i64 lb):
    cdef Py_ssize_t n = dist.shape[0]
    out = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] colors = out
    cdef i64[::1] head = np.full(max(n, 1), -1, dtype=np.int64)
    cdef i64[::1] nxt = np.full(max(n, 1), -1, dtype=np.int64)
    cdef i64 ncolors = 0
    cdef Py_ssize_t t
    cdef i64 v, c, m, prev, best
    cdef cnp.int16_t d
    with nogil:
        for t in range(order.shape[0]):
            v = order[t]
            best = -1
            if lb > 1:
                for c in range(ncolors):
                    m = head[c]
                    prev = -1
                    while m >= 0:
                        d = dist[v, m]
                        if d < 0 or d >= lb:
                            break
                        prev = m
                        m = nxt[m]
                    if m < 0:
                        best = c
                        break
                    if prev >= 0:
                        # move the violating member to the front of its class
                        nxt[prev] = nxt[m]
                        nxt[m] = head[c]
                        head[c] = m
            if best < 0:
                best = ncolors
                ncolors += 1
            colors[v] = best
            nxt[v] = head[best]
            head[best] = v
    return out

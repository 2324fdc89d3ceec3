"""Compiled inner loops. Every function here has a twin in ``_numpy``."""

import os

import numpy as np
from numba import config, njit, prange

from topocoarse.kernels._common import SNAP_RTOL, canonical_labels

if "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
    config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]


@njit(cache=True, nogil=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def _union_find_roots(n, edges):
    parent = np.arange(n)
    for e in range(edges.shape[0]):
        ru = _find(parent, edges[e, 0])
        rv = _find(parent, edges[e, 1])
        if ru != rv:
            # smaller id becomes root so labels do not depend on edge order
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    for v in range(n):
        _find(parent, v)
    return parent


def connected_components(n, edges):
    edges = np.ascontiguousarray(edges, dtype=np.int64).reshape(-1, 2)
    return canonical_labels(_union_find_roots(n, edges))


@njit(cache=True, nogil=True)
def h0_deaths(n, edges):
    """Elder-rule merge times for vertices all born at 0.

    ``edges`` must already be in filtration order. Returns the indices of
    the merging (negative) edges and the final root of every vertex.
    """
    parent = np.arange(n)
    killers = np.empty(min(edges.shape[0], max(n - 1, 0)), dtype=np.int64)
    k = 0
    for e in range(edges.shape[0]):
        ru = _find(parent, edges[e, 0])
        rv = _find(parent, edges[e, 1])
        if ru == rv:
            continue
        # equal birth times: the younger class is the one with larger root id
        if ru < rv:
            parent[rv] = ru
        else:
            parent[ru] = rv
        killers[k] = e
        k += 1
    for v in range(n):
        _find(parent, v)
    return killers[:k], parent


@njit(cache=True, nogil=True)
def _heap_push(hk, hv, size, key, val):
    i = size
    hk[i] = key
    hv[i] = val
    while i > 0:
        p = (i - 1) >> 1
        if hk[p] <= hk[i]:
            break
        hk[p], hk[i] = hk[i], hk[p]
        hv[p], hv[i] = hv[i], hv[p]
        i = p
    return size + 1


@njit(cache=True, nogil=True)
def _heap_pop(hk, hv, size):
    key = hk[0]
    val = hv[0]
    size -= 1
    hk[0] = hk[size]
    hv[0] = hv[size]
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        c = left
        if left + 1 < size and hk[left + 1] < hk[left]:
            c = left + 1
        if hk[i] <= hk[c]:
            break
        hk[c], hk[i] = hk[i], hk[c]
        hv[c], hv[i] = hv[i], hv[c]
        i = c
    return key, val, size


@njit(cache=True, nogil=True)
def _dijkstra_row(src, indptr, indices, weights, limit, out):
    n = indptr.shape[0] - 1
    cap = indices.shape[0] + n + 1
    hk = np.empty(cap)
    hv = np.empty(cap, dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    out[src] = 0.0
    size = _heap_push(hk, hv, 0, 0.0, src)
    while size > 0:
        d, u, size = _heap_pop(hk, hv, size)
        if done[u]:
            continue
        done[u] = True
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            nd = d + weights[p]
            if nd < out[v] and nd <= limit:
                out[v] = nd
                size = _heap_push(hk, hv, size, nd, v)


@njit(cache=True, nogil=True, parallel=True)
def _all_pairs(indptr, indices, weights, limit):
    n = indptr.shape[0] - 1
    dist = np.full((n, n), np.inf)
    for s in prange(n):
        _dijkstra_row(s, indptr, indices, weights, limit, dist[s])
    return dist


def all_pairs_shortest_paths(n, edges, weights, limit=np.inf):
    from topocoarse.kernels._common import to_csr

    indptr, indices, data = to_csr(n, edges, weights)
    dist = _all_pairs(indptr, indices, data, float(limit))
    # floating sums along different directions can differ in the last ulp
    return np.minimum(dist, dist.T)


@njit(cache=True, nogil=True)
def _triangle_time(a, b, c, aware):
    # sort the three side lengths
    if a > b:
        a, b = b, a
    if b > c:
        b, c = c, b
    if a > b:
        a, b = b, a
    if not aware:
        return c
    s = a + b
    if s - c <= SNAP_RTOL * c:
        return c
    return s


@njit(cache=True, nogil=True)
def triangle_filtration(dist, r_max, aware):
    n = dist.shape[0]
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            dij = dist[i, j]
            if not (dij <= r_max and dij < np.inf):
                continue
            for k in range(j + 1, n):
                dik = dist[i, k]
                djk = dist[j, k]
                if dik <= r_max and djk <= r_max and dik < np.inf and djk < np.inf:
                    if _triangle_time(dij, dik, djk, aware) <= r_max:
                        count += 1
    verts = np.empty((count, 3), dtype=np.int64)
    times = np.empty(count)
    t = 0
    for i in range(n):
        for j in range(i + 1, n):
            dij = dist[i, j]
            if not (dij <= r_max and dij < np.inf):
                continue
            for k in range(j + 1, n):
                dik = dist[i, k]
                djk = dist[j, k]
                if dik <= r_max and djk <= r_max and dik < np.inf and djk < np.inf:
                    tt = _triangle_time(dij, dik, djk, aware)
                    if tt <= r_max:
                        verts[t, 0] = i
                        verts[t, 1] = j
                        verts[t, 2] = k
                        times[t] = tt
                        t += 1
    return verts, times


@njit(cache=True, nogil=True)
def _xor_merge(a, la, b, lb, out):
    """Symmetric difference of two sorted runs into ``out``; returns length."""
    i = 0
    j = 0
    k = 0
    while i < la and j < lb:
        if a[i] < b[j]:
            out[k] = a[i]
            i += 1
            k += 1
        elif a[i] > b[j]:
            out[k] = b[j]
            j += 1
            k += 1
        else:
            i += 1
            j += 1
    while i < la:
        out[k] = a[i]
        i += 1
        k += 1
    while j < lb:
        out[k] = b[j]
        j += 1
        k += 1
    return k


@njit(cache=True, nogil=True)
def reduce_h1(boundaries, n_edges, n_positive):
    """Z/2 column reduction of triangle boundaries (rows are edge indices).

    Returns ``(edge_index, triangle_index)`` persistence pairs. Stops as soon
    as ``n_positive`` cycles have been killed.
    """
    m = boundaries.shape[0]
    pivot_of = np.full(n_edges, -1, dtype=np.int64)
    col_start = np.empty(n_edges, dtype=np.int64)
    col_len = np.empty(n_edges, dtype=np.int64)
    store = np.empty(max(64, 8 * n_positive), dtype=np.int64)
    used = 0
    cap = 64
    work = np.empty(cap, dtype=np.int64)
    tmp = np.empty(cap, dtype=np.int64)
    pair_e = np.empty(n_positive, dtype=np.int64)
    pair_t = np.empty(n_positive, dtype=np.int64)
    n_pairs = 0
    for t in range(m):
        if n_pairs == n_positive:
            break
        a = boundaries[t, 0]
        b = boundaries[t, 1]
        c = boundaries[t, 2]
        if a > b:
            a, b = b, a
        if b > c:
            b, c = c, b
        if a > b:
            a, b = b, a
        work[0] = a
        work[1] = b
        work[2] = c
        length = 3
        while length > 0:
            piv = work[length - 1]
            owner = pivot_of[piv]
            if owner < 0:
                break
            s = col_start[owner]
            lb = col_len[owner]
            if length + lb > cap:
                while length + lb > cap:
                    cap *= 2
                grown = np.empty(cap, dtype=np.int64)
                grown[:length] = work[:length]
                work = grown
                tmp = np.empty(cap, dtype=np.int64)
            length = _xor_merge(work, length, store[s:s + lb], lb, tmp)
            work, tmp = tmp, work
        if length == 0:
            continue
        piv = work[length - 1]
        if used + length > store.shape[0]:
            bigger = np.empty(max(2 * store.shape[0], used + length), dtype=np.int64)
            bigger[:used] = store[:used]
            store = bigger
        store[used:used + length] = work[:length]
        col_start[piv] = used
        col_len[piv] = length
        pivot_of[piv] = piv
        used += length
        pair_e[n_pairs] = piv
        pair_t[n_pairs] = t
        n_pairs += 1
    return pair_e[:n_pairs], pair_t[:n_pairs]


@njit(cache=True, nogil=True)
def _hopcroft_karp(adj):
    nl = adj.shape[0]
    nr = adj.shape[1]
    match_l = np.full(nl, -1, dtype=np.int64)
    match_r = np.full(nr, -1, dtype=np.int64)
    dist = np.empty(nl, dtype=np.int64)
    queue = np.empty(nl, dtype=np.int64)
    inf = nl + nr + 1
    # greedy warm start
    for u in range(nl):
        for v in range(nr):
            if adj[u, v] and match_r[v] < 0:
                match_l[u] = v
                match_r[v] = u
                break
    stack_u = np.empty(nl + 1, dtype=np.int64)
    stack_it = np.empty(nl + 1, dtype=np.int64)
    matched = 0
    for u in range(nl):
        if match_l[u] >= 0:
            matched += 1
    while True:
        head = 0
        tail = 0
        for u in range(nl):
            if match_l[u] < 0:
                dist[u] = 0
                queue[tail] = u
                tail += 1
            else:
                dist[u] = inf
        found = False
        while head < tail:
            u = queue[head]
            head += 1
            for v in range(nr):
                if adj[u, v]:
                    w = match_r[v]
                    if w < 0:
                        found = True
                    elif dist[w] == inf:
                        dist[w] = dist[u] + 1
                        queue[tail] = w
                        tail += 1
        if not found:
            break
        for root in range(nl):
            if match_l[root] >= 0:
                continue
            # iterative DFS along layered graph
            top = 0
            stack_u[0] = root
            stack_it[0] = 0
            augmented = False
            while top >= 0:
                u = stack_u[top]
                v = stack_it[top]
                advanced = False
                while v < nr:
                    if adj[u, v]:
                        w = match_r[v]
                        if w < 0:
                            # augment along the stack
                            stack_it[top] = v + 1
                            for level in range(top, -1, -1):
                                uu = stack_u[level]
                                vv = stack_it[level] - 1
                                match_l[uu] = vv
                                match_r[vv] = uu
                            augmented = True
                            break
                        if dist[w] == dist[u] + 1:
                            stack_it[top] = v + 1
                            top += 1
                            stack_u[top] = w
                            stack_it[top] = 0
                            advanced = True
                            break
                    v += 1
                if augmented:
                    break
                if not advanced:
                    dist[u] = inf
                    top -= 1
            if augmented:
                matched += 1
    return matched


def has_perfect_matching(adj):
    adj = np.ascontiguousarray(adj, dtype=np.bool_)
    if adj.shape[0] != adj.shape[1]:
        return False
    return _hopcroft_karp(adj) == adj.shape[0]

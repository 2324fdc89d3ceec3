"""Pure numpy / scipy twins of the compiled kernels in ``_numba``."""

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra, maximum_bipartite_matching

from topocoarse.kernels._common import SNAP_RTOL, canonical_labels, to_csr


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def connected_components(n, edges):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    parent = list(range(n))
    for u, v in edges.tolist():
        ru, rv = _find(parent, u), _find(parent, v)
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    roots = [_find(parent, v) for v in range(n)]
    return canonical_labels(np.array(roots, dtype=np.int64))


def h0_deaths(n, edges):
    parent = list(range(n))
    killers = []
    for e, (u, v) in enumerate(np.asarray(edges).tolist()):
        ru, rv = _find(parent, u), _find(parent, v)
        if ru == rv:
            continue
        if ru < rv:
            parent[rv] = ru
        else:
            parent[ru] = rv
        killers.append(e)
    roots = np.array([_find(parent, v) for v in range(n)], dtype=np.int64)
    return np.array(killers, dtype=np.int64), roots


def all_pairs_shortest_paths(n, edges, weights, limit=np.inf):
    indptr, indices, data = to_csr(n, edges, weights)
    # explicit zeros are kept as zero-length edges by csgraph
    adj = sp.csr_matrix((data, indices, indptr), shape=(n, n))
    dist = dijkstra(adj, directed=True, limit=float(limit))
    return np.minimum(dist, dist.T)


def triangle_filtration(dist, r_max, aware):
    n = dist.shape[0]
    verts, times = [], []
    within = np.isfinite(dist) & (dist <= r_max)
    for i in range(n - 2):
        js = np.flatnonzero(within[i, i + 1:]) + i + 1
        if js.size < 2:
            continue
        jj, kk = np.triu_indices(js.size, k=1)
        j, k = js[jj], js[kk]
        ok = within[j, k]
        j, k = j[ok], k[ok]
        sides = np.sort(np.stack([dist[i, j], dist[i, k], dist[j, k]], axis=1), axis=1)
        longest = sides[:, 2]
        if aware:
            s = sides[:, 0] + sides[:, 1]
            t = np.where(s - longest <= SNAP_RTOL * longest, longest, s)
        else:
            t = longest
        keep = t <= r_max
        verts.append(np.stack([np.full(keep.sum(), i), j[keep], k[keep]], axis=1))
        times.append(t[keep])
    if not verts:
        return np.empty((0, 3), dtype=np.int64), np.empty(0)
    return np.concatenate(verts).astype(np.int64), np.concatenate(times)


def reduce_h1(boundaries, n_edges, n_positive):
    """Same contract as the compiled version; columns are Python int bitsets."""
    pivot_col = {}
    pair_e, pair_t = [], []
    for t, (a, b, c) in enumerate(np.asarray(boundaries).tolist()):
        if len(pair_e) == n_positive:
            break
        col = (1 << a) ^ (1 << b) ^ (1 << c)
        while col:
            piv = col.bit_length() - 1
            other = pivot_col.get(piv)
            if other is None:
                break
            col ^= other
        if col:
            piv = col.bit_length() - 1
            pivot_col[piv] = col
            pair_e.append(piv)
            pair_t.append(t)
    return np.array(pair_e, dtype=np.int64), np.array(pair_t, dtype=np.int64)


def has_perfect_matching(adj):
    adj = np.asarray(adj, dtype=bool)
    if adj.shape[0] != adj.shape[1]:
        return False
    if adj.shape[0] == 0:
        return True
    match = maximum_bipartite_matching(sp.csr_matrix(adj), perm_type="column")
    return bool(np.all(match >= 0))

import numpy as np

# Relative slack under which a triangle whose two short sides add up to its
# long side is treated as flat. Shortest-path sums accumulate rounding in a
# different order for (u, w) than for (u, v) + (v, w).
SNAP_RTOL = 1e-10


def canonical_labels(roots):
    """Relabel component representatives as 0..K-1 by smallest member."""
    roots = np.asarray(roots)
    _, first, inverse = np.unique(roots, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return rank[inverse].astype(np.int64)


def to_csr(n, edges, weights):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    weights = np.asarray(weights, dtype=np.float64)
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    w = np.concatenate([weights, weights])
    order = np.lexsort((dst, src))
    src, dst, w = src[order], dst[order], w[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    return np.cumsum(indptr), dst, w

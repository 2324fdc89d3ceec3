"""Synthetic spatial graphs."""

from __future__ import annotations

import numpy as np

from topocoarse.graph import SpatialGraph


def gen_annulus(
    n: int = 100,
    inner: float = 0.7,
    outer: float = 1.0,
    p_frac: float = 0.1,
    seed: int | None = 0,
) -> SpatialGraph:
    """Points uniform (by area) on an annulus, keeping the shortest pairs as edges.

    Exactly ``floor(p_frac * n * (n - 1) / 2)`` edges are kept; ties in
    length are broken by pair index.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 < inner < outer:
        raise ValueError("need 0 < inner < outer")
    if not 0 < p_frac <= 1:
        raise ValueError("p_frac must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    radius = np.sqrt(u * (outer**2 - inner**2) + inner**2)
    angle = rng.uniform(0.0, 2 * np.pi, n)
    pos = np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)
    iu, ju = np.triu_indices(n, k=1)
    d = np.linalg.norm(pos[iu] - pos[ju], axis=1)
    m = int(np.floor(p_frac * n * (n - 1) / 2))
    keep = np.sort(np.argsort(d, kind="stable")[:m])
    return SpatialGraph(pos, np.stack([iu[keep], ju[keep]], axis=1))


def random_geometric_graph(n: int, edge_prob: float, seed=None, dim: int = 2) -> SpatialGraph:
    """Uniform points in the unit cube with an Erdos-Renyi edge subset."""
    rng = np.random.default_rng(seed)
    pos = rng.random((n, dim))
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < edge_prob
    return SpatialGraph(pos, np.stack([iu[keep], ju[keep]], axis=1))

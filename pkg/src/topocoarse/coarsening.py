"""Threshold coarsening: collapse every edge no longer than ``theta``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from topocoarse import kernels
from topocoarse.graph import LENGTH, EdgeWeighting, SpatialGraph, edge_weights, weighted_degrees

Positioning = Literal["average", "degree"]


@dataclass(frozen=True, eq=False)
class NodePartition:
    block_of: np.ndarray

    @property
    def n_blocks(self) -> int:
        return int(self.block_of.max(initial=-1)) + 1

    @property
    def blocks(self) -> list[np.ndarray]:
        order = np.argsort(self.block_of, kind="stable")
        bounds = np.searchsorted(self.block_of[order], np.arange(self.n_blocks + 1))
        return [order[bounds[i] : bounds[i + 1]] for i in range(self.n_blocks)]

    def __eq__(self, other):
        if not isinstance(other, NodePartition):
            return NotImplemented
        return np.array_equal(self.block_of, other.block_of)


@dataclass(frozen=True, eq=False)
class CoarseningResult:
    coarse: SpatialGraph
    partition: NodePartition
    theta: float
    positioning: Positioning
    weighting: EdgeWeighting
    # original edge index -> super-edge index, -1 for edges inside a block
    super_edge_of: np.ndarray


def sub_graph(g: SpatialGraph, weighting: EdgeWeighting, theta: float) -> np.ndarray:
    """Indices of the edges with weight ``<= theta``."""
    if theta < 0:
        raise ValueError(f"theta must be non-negative, got {theta}")
    return np.flatnonzero(edge_weights(g, weighting) <= theta)


def _super_edges(block_of, edges):
    bu = block_of[edges[:, 0]]
    bv = block_of[edges[:, 1]]
    lo, hi = np.minimum(bu, bv), np.maximum(bu, bv)
    crossing = lo != hi
    pairs, inverse = np.unique(np.stack([lo[crossing], hi[crossing]], axis=1), axis=0, return_inverse=True)
    super_of = np.full(edges.shape[0], -1, dtype=np.int64)
    super_of[crossing] = inverse.reshape(-1)
    return pairs.reshape(-1, 2), super_of


def _positions(g, weighting, block_of, n_blocks, positioning):
    p = g.dim
    if positioning == "average":
        sums = np.zeros((n_blocks, p))
        np.add.at(sums, block_of, g.positions)
        counts = np.bincount(block_of, minlength=n_blocks)
        return sums / counts[:, None]
    if positioning == "degree":
        deg = weighted_degrees(g, weighting)
        # highest weighted degree, ties to the smallest node id
        order = np.lexsort((np.arange(g.n_nodes), -deg, block_of))
        first = np.searchsorted(block_of[order], np.arange(n_blocks))
        return g.positions[order[first]].copy()
    raise ValueError(f"unknown positioning {positioning!r}")


def coarsen(
    g: SpatialGraph,
    weighting: EdgeWeighting = LENGTH,
    theta: float = 0.0,
    positioning: Positioning = "average",
) -> CoarseningResult:
    """Quotient of ``g`` by the connected components of its short-edge subgraph.

    Hypernodes are numbered by their smallest member. The coarse graph keeps
    no custom weights; its edges are measured by the Euclidean distance
    between hypernode positions (see :func:`aggregate_custom_weights` for
    the alternative).
    """
    short = sub_graph(g, weighting, theta)
    block_of = kernels.connected_components(g.n_nodes, g.edges[short])
    n_blocks = int(block_of.max(initial=-1)) + 1
    pairs, super_of = _super_edges(block_of, g.edges)
    pos = _positions(g, weighting, block_of, n_blocks, positioning)
    coarse = SpatialGraph(pos, pairs)
    return CoarseningResult(coarse, NodePartition(block_of), float(theta), positioning, weighting, super_of)


def aggregate_custom_weights(
    g: SpatialGraph, result: CoarseningResult, rule: Literal["min", "sum"] = "min"
) -> np.ndarray:
    """One weight per super-edge, combining the custom weights crossing it."""
    from topocoarse.graph import CUSTOM

    w = edge_weights(g, CUSTOM)
    m = result.coarse.n_edges
    crossing = result.super_edge_of >= 0
    idx = result.super_edge_of[crossing]
    if rule == "min":
        out = np.full(m, np.inf)
        np.minimum.at(out, idx, w[crossing])
    elif rule == "sum":
        out = np.zeros(m)
        np.add.at(out, idx, w[crossing])
    else:
        raise ValueError(f"unknown aggregation rule {rule!r}")
    return out


def with_custom_weights(g: SpatialGraph, result: CoarseningResult, rule: Literal["min", "sum"] = "min") -> SpatialGraph:
    c = result.coarse
    return SpatialGraph(c.positions, c.edges, aggregate_custom_weights(g, result, rule))

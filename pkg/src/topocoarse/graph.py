"""Spatial graph data model and edge weightings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Literal, Sequence

import numpy as np


class ConfigurationError(ValueError):
    """A weighting or parameter is incompatible with the graph."""


class GraphValidationError(ValueError):
    """Raised when a graph violates one or more invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True, eq=False)
class SpatialGraph:
    """Undirected graph with nodes positioned in R^p.

    ``positions`` is an ``(n, p)`` float array, ``edges`` an ``(m, 2)`` int
    array of node indices. ``custom_weights`` (optional) holds one positive
    value per edge. ``ids`` keeps the original node identifiers so that a
    graph read from disk can be written back with the same labels.

    The constructor stores what it is given; call :func:`validate` (the
    loaders do) to check invariants.
    """

    positions: np.ndarray
    edges: np.ndarray
    custom_weights: np.ndarray | None = None
    ids: tuple[Hashable, ...] | None = None

    def __post_init__(self):
        pos = np.array(self.positions, dtype=np.float64)
        if pos.ndim == 1:
            pos = pos.reshape(-1, 1)
        edges = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        pos.setflags(write=False)
        edges.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "edges", edges)
        if self.custom_weights is not None:
            w = np.array(self.custom_weights, dtype=np.float64).reshape(-1)
            w.setflags(write=False)
            object.__setattr__(self, "custom_weights", w)
        if self.ids is not None:
            object.__setattr__(self, "ids", tuple(self.ids))

    @property
    def n_nodes(self) -> int:
        return self.positions.shape[0]

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    @property
    def node_ids(self) -> tuple:
        return self.ids if self.ids is not None else tuple(range(self.n_nodes))

    def degrees(self) -> np.ndarray:
        """Combinatorial degree of every node."""
        return np.bincount(self.edges.ravel(), minlength=self.n_nodes)

    def n_components(self) -> int:
        from topocoarse.kernels import connected_components

        return int(connected_components(self.n_nodes, self.edges).max(initial=-1) + 1)

    def with_positions(self, positions) -> "SpatialGraph":
        return SpatialGraph(positions, self.edges, self.custom_weights, self.ids)


@dataclass(frozen=True)
class EdgeWeighting:
    """Which scalar is used as the length of an edge.

    ``mode="length"`` uses the Euclidean distance between endpoints,
    ``mode="custom"`` the per-edge values stored on the graph.
    """

    mode: Literal["length", "custom"] = "length"
    attribute: str = field(default="weight")

    def __post_init__(self):
        if self.mode not in ("length", "custom"):
            raise ConfigurationError(f"unknown weighting mode {self.mode!r}")


LENGTH = EdgeWeighting("length")
CUSTOM = EdgeWeighting("custom")


def edge_lengths(g: SpatialGraph) -> np.ndarray:
    if g.n_edges == 0:
        return np.zeros(0)
    diff = g.positions[g.edges[:, 0]] - g.positions[g.edges[:, 1]]
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def edge_weights(g: SpatialGraph, weighting: EdgeWeighting = LENGTH) -> np.ndarray:
    """Weight of every edge of ``g``, in edge order."""
    if weighting.mode == "length":
        return edge_lengths(g)
    if g.custom_weights is None:
        raise ConfigurationError(
            f"custom weighting requested but graph has no {weighting.attribute!r} attribute"
        )
    if g.custom_weights.shape[0] != g.n_edges:
        raise ConfigurationError(
            f"{weighting.attribute!r} attribute missing on some edges "
            f"({g.custom_weights.shape[0]} values for {g.n_edges} edges)"
        )
    return g.custom_weights.copy()


def edge_weight(g: SpatialGraph, weighting: EdgeWeighting, e: tuple[int, int]) -> float:
    u, v = int(e[0]), int(e[1])
    match = np.flatnonzero(
        ((g.edges[:, 0] == u) & (g.edges[:, 1] == v))
        | ((g.edges[:, 0] == v) & (g.edges[:, 1] == u))
    )
    if match.size == 0:
        raise KeyError(f"({u}, {v}) is not an edge")
    i = match[0]
    if weighting.mode == "length":
        return float(np.linalg.norm(g.positions[u] - g.positions[v]))
    return float(edge_weights(g, weighting)[i])


def weighted_degrees(g: SpatialGraph, weighting: EdgeWeighting = LENGTH) -> np.ndarray:
    """Sum of incident edge weights for every node (0 when isolated)."""
    w = edge_weights(g, weighting)
    deg = np.zeros(g.n_nodes)
    np.add.at(deg, g.edges[:, 0], w)
    np.add.at(deg, g.edges[:, 1], w)
    return deg


def weighted_degree(g: SpatialGraph, weighting: EdgeWeighting, v: int) -> float:
    if not 0 <= v < g.n_nodes:
        raise IndexError(f"node {v} out of range")
    return float(weighted_degrees(g, weighting)[v])


def validate(g: SpatialGraph) -> list[str]:
    """Return every invariant violation of ``g``; an empty list means valid."""
    violations = []
    n = g.n_nodes
    if n < 1:
        violations.append("graph has no nodes")
    if not np.all(np.isfinite(g.positions)):
        bad = np.flatnonzero(~np.all(np.isfinite(g.positions), axis=1))
        violations.append(f"non-finite coordinate at node(s) {bad.tolist()}")
    e = g.edges
    if e.size:
        out = np.flatnonzero((e < 0).any(axis=1) | (e >= n).any(axis=1))
        if out.size:
            violations.append(f"edge endpoint out of range at edge(s) {out.tolist()}")
        loops = np.flatnonzero(e[:, 0] == e[:, 1])
        if loops.size:
            violations.append(f"self-loop at edge(s) {loops.tolist()}")
        key = np.sort(e, axis=1)
        _, first, counts = np.unique(key, axis=0, return_index=True, return_counts=True)
        if (counts > 1).any():
            dups = key[first[counts > 1]]
            violations.append(f"duplicate edge {[tuple(d) for d in dups.tolist()]}")
    if g.custom_weights is not None:
        w = g.custom_weights
        if w.shape[0] != g.n_edges:
            violations.append(
                f"custom weight count {w.shape[0]} does not match edge count {g.n_edges}"
            )
        elif not np.all(np.isfinite(w) & (w > 0)):
            bad = np.flatnonzero(~(np.isfinite(w) & (w > 0)))
            violations.append(f"non-positive or non-finite custom weight at edge(s) {bad.tolist()}")
    if g.ids is not None:
        if len(g.ids) != n:
            violations.append(f"{len(g.ids)} ids for {n} nodes")
        elif len(set(g.ids)) != n:
            violations.append("duplicate node id")
    return violations


def check(g: SpatialGraph) -> SpatialGraph:
    violations = validate(g)
    if violations:
        raise GraphValidationError(violations)
    return g


def check_weighting(g: SpatialGraph, weighting: EdgeWeighting) -> None:
    if weighting.mode == "custom":
        edge_weights(g, weighting)

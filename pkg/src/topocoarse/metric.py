"""Shortest-path metric over a spatial graph."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from topocoarse import kernels
from topocoarse.graph import (
    LENGTH,
    ConfigurationError,
    EdgeWeighting,
    SpatialGraph,
    edge_weights,
)


@dataclass(frozen=True, eq=False)
class GraphMetric:
    """Dense all-pairs shortest-path distances.

    ``dist[u, v]`` is ``inf`` for pairs in different components, and also
    for pairs further apart than ``r_max`` when the metric is truncated.
    ``component_of`` and ``component_diameters`` always describe the whole
    graph, independently of truncation.
    """

    dist: np.ndarray
    component_of: np.ndarray
    component_diameters: np.ndarray
    r_max: float = np.inf

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def n_components(self) -> int:
        return self.component_diameters.shape[0]

    @property
    def max_diameter(self) -> float:
        return float(self.component_diameters.max(initial=0.0))

    def scaled(self, k: float) -> "GraphMetric":
        return GraphMetric(self.dist * k, self.component_of, self.component_diameters * k, self.r_max * k)


def _weights_checked(g: SpatialGraph, weighting: EdgeWeighting) -> np.ndarray:
    w = edge_weights(g, weighting)
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ConfigurationError("shortest paths need finite non-negative edge weights")
    return w


def _diameters(dist, component_of, n_comp):
    diam = np.zeros(n_comp)
    finite = np.where(np.isfinite(dist), dist, -np.inf).max(axis=1, initial=0.0)
    np.maximum.at(diam, component_of, finite)
    return diam


def shortest_path_metric(g: SpatialGraph, weighting: EdgeWeighting = LENGTH) -> GraphMetric:
    w = _weights_checked(g, weighting)
    dist = kernels.all_pairs_shortest_paths(g.n_nodes, g.edges, w)
    comp = kernels.connected_components(g.n_nodes, g.edges)
    n_comp = int(comp.max(initial=-1)) + 1
    return GraphMetric(dist, comp, _diameters(dist, comp, n_comp))


def truncated_metric(g: SpatialGraph, weighting: EdgeWeighting, r_max: float) -> GraphMetric:
    """Shortest paths with every distance above ``r_max`` replaced by ``inf``.

    Component diameters come from an untruncated pass only when they are
    needed; here they are reported as the largest distance that survived
    truncation, capped at ``r_max``.
    """
    if not r_max > 0:
        raise ConfigurationError(f"r_max must be positive, got {r_max}")
    w = _weights_checked(g, weighting)
    dist = kernels.all_pairs_shortest_paths(g.n_nodes, g.edges, w, r_max)
    comp = kernels.connected_components(g.n_nodes, g.edges)
    n_comp = int(comp.max(initial=-1)) + 1
    return GraphMetric(dist, comp, _diameters(dist, comp, n_comp), float(r_max))

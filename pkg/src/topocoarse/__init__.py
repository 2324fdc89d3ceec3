"""Topology-preserving coarsening of spatial graphs."""

from topocoarse.bottleneck import bottleneck_distance
from topocoarse.coarsening import CoarseningResult, NodePartition, coarsen, sub_graph
from topocoarse.features import FeatureVector, extract_features, landscape_l2_norm
from topocoarse.filtration import FilteredComplex, build_filtration, build_unmodified_filtration
from topocoarse.generators import gen_annulus, random_geometric_graph
from topocoarse.graph import CUSTOM, LENGTH, EdgeWeighting, SpatialGraph, validate
from topocoarse.metric import GraphMetric, shortest_path_metric, truncated_metric
from topocoarse.io import load_graph, save_graph
from topocoarse.persistence import PersistenceDiagram, compute_persistence
from topocoarse.selector import ScoreCurve, quantile_grid, score_curve, select
from topocoarse.similarity import Similarity, apply_similarity, random_similarity

__version__ = "0.1.0"

__all__ = [
    "CUSTOM",
    "LENGTH",
    "CoarseningResult",
    "EdgeWeighting",
    "FeatureVector",
    "FilteredComplex",
    "GraphMetric",
    "NodePartition",
    "PersistenceDiagram",
    "ScoreCurve",
    "Similarity",
    "SpatialGraph",
    "apply_similarity",
    "bottleneck_distance",
    "build_filtration",
    "build_unmodified_filtration",
    "coarsen",
    "compute_persistence",
    "extract_features",
    "gen_annulus",
    "landscape_l2_norm",
    "load_graph",
    "quantile_grid",
    "random_geometric_graph",
    "random_similarity",
    "save_graph",
    "score_curve",
    "select",
    "shortest_path_metric",
    "sub_graph",
    "truncated_metric",
    "validate",
]

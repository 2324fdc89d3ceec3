"""Score-driven choice of the coarsening threshold."""

from __future__ import annotations

import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from topocoarse.bottleneck import bottleneck_distance
from topocoarse.coarsening import CoarseningResult, Positioning, coarsen, with_custom_weights
from topocoarse.filtration import build_filtration, default_r_max
from topocoarse.graph import LENGTH, CUSTOM, EdgeWeighting, SpatialGraph, edge_weights
from topocoarse.metric import shortest_path_metric, truncated_metric
from topocoarse.persistence import PersistenceDiagram, compute_persistence

DEFAULT_GRID_SIZE = 10
# relative slack under which two scores count as tied
SCORE_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class ThetaGrid:
    m: int
    values: np.ndarray
    quantile_levels: np.ndarray


def quantile_grid(weights, m: int = DEFAULT_GRID_SIZE) -> ThetaGrid:
    """Lower empirical quantiles at levels 1/(m+1), ..., m/(m+1), deduplicated.

    The level kept for a repeated value is the first one that produced it.
    """
    w = np.sort(np.asarray(weights, dtype=np.float64).reshape(-1))
    if w.size == 0:
        raise ValueError("cannot build a threshold grid from an empty weight list")
    if m < 1:
        raise ValueError("grid size must be at least 1")
    n = w.size
    levels = np.arange(1, m + 1) / (m + 1)
    # rank ceil(alpha * N), computed in integers to avoid rounding at exact multiples
    ranks = np.array([max(1, -(-(k * n) // (m + 1))) for k in range(1, m + 1)])
    values = w[ranks - 1]
    values, first = np.unique(values, return_index=True)
    return ThetaGrid(m, values, levels[first])


@dataclass
class ScoreRow:
    theta: float
    alpha: float
    edge_ratio: float
    bottleneck: float
    score: float = math.nan


@dataclass
class ScoreCurve:
    rows: list[ScoreRow]
    lam: float | None
    argmin_index: int
    r_max: float
    dims: str = "max"
    results: list[CoarseningResult] = field(default_factory=list, repr=False)
    diagrams: list[PersistenceDiagram] = field(default_factory=list, repr=False)
    original_diagram: PersistenceDiagram | None = field(default=None, repr=False)

    @property
    def theta_star(self) -> float:
        return self.rows[self.argmin_index].theta

    @property
    def alpha_star(self) -> float:
        return self.rows[self.argmin_index].alpha

    @property
    def thetas(self) -> np.ndarray:
        return np.array([r.theta for r in self.rows])

    @property
    def scores(self) -> np.ndarray:
        return np.array([r.score for r in self.rows])

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("theta,alpha,edge_ratio,bottleneck,score\n")
        for r in self.rows:
            out.write(f"{r.theta!r},{r.alpha!r},{r.edge_ratio!r},{r.bottleneck!r},{r.score!r}\n")
        lam = "disabled" if self.lam is None else repr(self.lam)
        out.write(f"# lambda={lam} theta_star={self.theta_star!r}\n")
        return out.getvalue()


def worker_count() -> int:
    raw = os.environ.get("TOPOCOARSE_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError("TOPOCOARSE_THREADS must be >= 0")
    return n if n > 0 else (os.cpu_count() or 1)


def diagram(g: SpatialGraph, weighting: EdgeWeighting, r_max: float) -> PersistenceDiagram:
    return compute_persistence(build_filtration(truncated_metric(g, weighting, r_max), r_max))


def _reduced_graph(g, result, coarse_weights):
    if coarse_weights == "length":
        return result.coarse, LENGTH
    return with_custom_weights(g, result, coarse_weights), CUSTOM


def score_curve(
    g: SpatialGraph,
    weighting: EdgeWeighting = LENGTH,
    positioning: Positioning = "average",
    m: int = DEFAULT_GRID_SIZE,
    r_max_frac: float = 2.0,
    dims: Literal["max", "1"] = "max",
    coarse_weights: Literal["length", "min", "sum"] = "length",
    include_zero: bool = False,
    workers: int | None = None,
) -> ScoreCurve:
    """Evaluate the edge-ratio plus scaled-bottleneck score over the quantile grid.

    One ``r_max`` (``r_max_frac`` times the original graph's largest
    component diameter) caps every filtration, original and reduced alike.
    With ``include_zero`` an extra first row at ``theta = 0`` is added for
    debugging; it never takes part in the argmin or in the normalisation.
    """
    if g.n_edges == 0:
        raise ValueError("score curve needs a graph with at least one edge")
    weights = edge_weights(g, weighting)
    grid = quantile_grid(weights, m)
    metric = shortest_path_metric(g, weighting)
    r_max = default_r_max(metric, r_max_frac)
    pd_orig = compute_persistence(build_filtration(metric, r_max))
    dim_arg = "max" if dims == "max" else 1

    def evaluate(theta):
        res = coarsen(g, weighting, theta, positioning)
        h, hw = _reduced_graph(g, res, coarse_weights)
        pd = diagram(h, hw, r_max)
        return res, pd, bottleneck_distance(pd_orig, pd, dim_arg)

    thetas = list(grid.values)
    alphas = list(grid.quantile_levels)
    if include_zero:
        thetas.insert(0, 0.0)
        alphas.insert(0, 0.0)
    workers = workers or worker_count()
    if workers > 1 and len(thetas) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evaluated = list(pool.map(evaluate, thetas))
    else:
        evaluated = [evaluate(t) for t in thetas]

    rows = [
        ScoreRow(float(t), float(a), res.coarse.n_edges / g.n_edges, float(db))
        for t, a, (res, _, db) in zip(thetas, alphas, evaluated)
    ]
    scored = rows[1:] if include_zero else rows
    d_max = max(r.bottleneck for r in scored)
    lam = 1.0 / d_max if d_max > 0 else None
    for r in rows:
        r.score = r.edge_ratio + (lam * r.bottleneck if lam is not None else 0.0)
    offset = 1 if include_zero else 0
    best = _argmin_prefer_last([r.score for r in scored]) + offset
    return ScoreCurve(
        rows,
        lam,
        best,
        r_max,
        dims,
        results=[e[0] for e in evaluated],
        diagrams=[e[1] for e in evaluated],
        original_diagram=pd_orig,
    )


def _argmin_prefer_last(scores) -> int:
    lo = min(scores)
    tol = SCORE_TIE_RTOL * max(abs(lo), 1.0)
    return max(i for i, s in enumerate(scores) if s - lo <= tol)


def select(
    g: SpatialGraph,
    weighting: EdgeWeighting = LENGTH,
    positioning: Positioning = "average",
    m: int = DEFAULT_GRID_SIZE,
    r_max_frac: float = 2.0,
    **kwargs,
) -> tuple[float, CoarseningResult, ScoreCurve]:
    """Coarsen ``g`` at the grid threshold with the lowest score."""
    curve = score_curve(g, weighting, positioning, m, r_max_frac, **kwargs)
    return curve.theta_star, curve.results[curve.argmin_index], curve

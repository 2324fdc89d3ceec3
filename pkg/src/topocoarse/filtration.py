"""Shortest-path Vietoris-Rips filtrations up to dimension 2.

Two variants share the vertex and edge rules (vertices at 0, pair ``{u, v}``
at ``d(u, v)``) and differ only for triangles:

* triangle-aware: a triangle enters at the sum of its two shortest sides, so
  cycles made of three edges get a nonzero lifetime;
* unmodified: a triangle enters with its longest side, as in plain VR.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from topocoarse import kernels
from topocoarse.kernels._common import SNAP_RTOL
from topocoarse.metric import GraphMetric


class FilteredSimplex(NamedTuple):
    vertices: tuple[int, ...]
    time: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """Simplices grouped by dimension, each group in (time, lex) order.

    The merged stream order is (time, dim, lex); iterate ``simplices()`` to
    get it.
    """

    n_vertices: int
    edges: np.ndarray
    edge_times: np.ndarray
    triangles: np.ndarray
    triangle_times: np.ndarray
    r_max: float
    component_of: np.ndarray

    @property
    def n_simplices(self) -> int:
        return self.n_vertices + self.edges.shape[0] + self.triangles.shape[0]

    def simplices(self) -> Iterator[FilteredSimplex]:
        times = np.concatenate([np.zeros(self.n_vertices), self.edge_times, self.triangle_times])
        dims = np.concatenate([
            np.zeros(self.n_vertices, dtype=np.int64),
            np.ones(self.edges.shape[0], dtype=np.int64),
            np.full(self.triangles.shape[0], 2, dtype=np.int64),
        ])
        rows = np.full((times.size, 3), -1, dtype=np.int64)
        rows[: self.n_vertices, 0] = np.arange(self.n_vertices)
        e0 = self.n_vertices
        rows[e0 : e0 + self.edges.shape[0], :2] = self.edges
        rows[e0 + self.edges.shape[0] :] = self.triangles
        order = np.lexsort((rows[:, 2], rows[:, 1], rows[:, 0], dims, times))
        for i in order:
            verts = tuple(int(v) for v in rows[i, : dims[i] + 1])
            yield FilteredSimplex(verts, float(times[i]))

    def edge_index(self) -> np.ndarray:
        """``(n, n)`` lookup from vertex pair to position in ``edges``."""
        idx = np.full((self.n_vertices, self.n_vertices), -1, dtype=np.int64)
        ar = np.arange(self.edges.shape[0])
        idx[self.edges[:, 0], self.edges[:, 1]] = ar
        idx[self.edges[:, 1], self.edges[:, 0]] = ar
        return idx

    def check(self) -> None:
        """Assert that every face enters no later than its cofaces."""
        if self.triangles.shape[0] == 0:
            return
        idx = self.edge_index()
        t = self.triangles
        faces = np.stack([idx[t[:, 0], t[:, 1]], idx[t[:, 0], t[:, 2]], idx[t[:, 1], t[:, 2]]], axis=1)
        if (faces < 0).any():
            raise AssertionError("triangle present without all of its edges")
        if (self.edge_times[faces].max(axis=1) > self.triangle_times).any():
            raise AssertionError("triangle enters before one of its edges")

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("time,dim,v0,v1,v2\n")
        for s in self.simplices():
            cells = [repr(s.time), str(s.dim)] + [str(v) for v in s.vertices]
            cells += [""] * (3 - len(s.vertices))
            out.write(",".join(cells) + "\n")
        return out.getvalue()


def _edges(dist: np.ndarray, r_max: float):
    iu, ju = np.triu_indices(dist.shape[0], k=1)
    d = dist[iu, ju]
    keep = np.isfinite(d) & (d <= r_max)
    iu, ju, d = iu[keep], ju[keep], d[keep]
    order = np.lexsort((ju, iu, d))
    return np.stack([iu[order], ju[order]], axis=1).astype(np.int64), d[order]


def _build(metric: GraphMetric, r_max: float | None, aware: bool) -> FilteredComplex:
    if r_max is None:
        r_max = metric.r_max
    r_max = float(r_max)
    dist = metric.dist
    if not np.array_equal(dist, dist.T):
        raise ValueError("metric is not symmetric")
    edges, edge_times = _edges(dist, r_max)
    tri, tri_times = kernels.triangle_filtration(dist, r_max, aware)
    if tri.shape[0]:
        sides = np.sort(
            np.stack([dist[tri[:, 0], tri[:, 1]], dist[tri[:, 0], tri[:, 2]], dist[tri[:, 1], tri[:, 2]]], axis=1),
            axis=1,
        )
        gap = sides[:, 0] + sides[:, 1] - sides[:, 2]
        # a real triangle inequality violation, not rounding
        assert (gap >= -SNAP_RTOL * sides[:, 2] - 1e-300).all(), "metric violates the triangle inequality"
        order = np.lexsort((tri[:, 2], tri[:, 1], tri[:, 0], tri_times))
        tri, tri_times = tri[order], tri_times[order]
    return FilteredComplex(
        n_vertices=metric.n,
        edges=edges,
        edge_times=edge_times,
        triangles=tri,
        triangle_times=tri_times,
        r_max=r_max,
        component_of=metric.component_of,
    )


def build_filtration(metric: GraphMetric, r_max: float | None = None) -> FilteredComplex:
    """Triangle-aware filtration, truncated at ``r_max`` (default: the metric's own)."""
    return _build(metric, r_max, aware=True)


def build_unmodified_filtration(metric: GraphMetric, r_max: float | None = None) -> FilteredComplex:
    return _build(metric, r_max, aware=False)


def default_r_max(metric: GraphMetric, fraction: float = 2.0) -> float:
    """``fraction`` times the largest component diameter.

    With ``fraction >= 2`` every 1-cycle dies before the cap. Falls back to
    1.0 for graphs whose diameter is zero (no edges, or only zero-length ones).
    """
    diam = metric.max_diameter
    r = fraction * diam
    return r if r > 0 else 1.0

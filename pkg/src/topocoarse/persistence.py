"""Persistence diagrams in dimensions 0 and 1."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from topocoarse import kernels
from topocoarse.filtration import FilteredComplex


class PersistencePoint(NamedTuple):
    dim: int
    birth: float
    death: float
    truncated: bool = False


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Points stored column-wise and kept in (dim, birth, death) order.

    ``truncated`` marks classes still alive at ``r_max`` whose death was
    capped there. Essential classes (one per connected component in
    dimension 0) have ``death = inf``.
    """

    dims: np.ndarray
    births: np.ndarray
    deaths: np.ndarray
    truncated: np.ndarray

    def __post_init__(self):
        dims = np.asarray(self.dims, dtype=np.int64).reshape(-1)
        births = np.asarray(self.births, dtype=np.float64).reshape(-1)
        deaths = np.asarray(self.deaths, dtype=np.float64).reshape(-1)
        trunc = np.asarray(self.truncated, dtype=bool).reshape(-1)
        order = np.lexsort((deaths, births, dims))
        for name, arr in (("dims", dims), ("births", births), ("deaths", deaths), ("truncated", trunc)):
            arr = arr[order]
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_points(cls, points) -> "PersistenceDiagram":
        points = list(points)
        if not points:
            return cls.empty()
        cols = list(zip(*[(p[0], p[1], p[2], p[3] if len(p) > 3 else False) for p in points]))
        return cls(*cols)

    @classmethod
    def empty(cls) -> "PersistenceDiagram":
        return cls(np.zeros(0, dtype=np.int64), np.zeros(0), np.zeros(0), np.zeros(0, dtype=bool))

    def __len__(self):
        return self.dims.shape[0]

    def __iter__(self):
        for d, b, e, t in zip(self.dims.tolist(), self.births.tolist(), self.deaths.tolist(), self.truncated.tolist()):
            yield PersistencePoint(d, b, e, t)

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return (
            np.array_equal(self.dims, other.dims)
            and np.array_equal(self.births, other.births)
            and np.array_equal(self.deaths, other.deaths)
        )

    def __repr__(self):
        pts = ", ".join(f"H{d}({b:g}, {e:g})" for d, b, e, _ in self)
        return f"PersistenceDiagram([{pts}])"

    @property
    def essential_count_dim0(self) -> int:
        return int(np.sum((self.dims == 0) & np.isinf(self.deaths)))

    def essential_count(self, dim: int) -> int:
        return int(np.sum((self.dims == dim) & np.isinf(self.deaths)))

    def select(self, dim: int) -> "PersistenceDiagram":
        m = self.dims == dim
        return PersistenceDiagram(self.dims[m], self.births[m], self.deaths[m], self.truncated[m])

    def finite(self, dim: int) -> np.ndarray:
        """``(k, 2)`` array of finite (birth, death) pairs in ``dim``.

        Truncated points are finite (death = r_max) and included.
        """
        m = (self.dims == dim) & np.isfinite(self.deaths)
        return np.stack([self.births[m], self.deaths[m]], axis=1)

    def pairs(self, dim: int) -> list[tuple[float, float]]:
        m = self.dims == dim
        return list(zip(self.births[m].tolist(), self.deaths[m].tolist()))

    def drop_zero(self) -> "PersistenceDiagram":
        m = self.deaths != self.births
        return PersistenceDiagram(self.dims[m], self.births[m], self.deaths[m], self.truncated[m])

    def scaled(self, k: float) -> "PersistenceDiagram":
        return PersistenceDiagram(self.dims, self.births * k, self.deaths * k, self.truncated)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("dim,birth,death\n")
        for d, b, e, _ in self:
            out.write(f"{d},{_fmt(b)},{_fmt(e)}\n")
        return out.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PersistenceDiagram":
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["dim", "birth", "death"]:
            raise ValueError("diagram CSV must start with header 'dim,birth,death'")
        pts = []
        for lineno, row in enumerate(reader, start=2):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 3:
                raise ValueError(f"line {lineno}: expected 3 fields, got {len(row)}")
            try:
                pts.append((int(row[0]), float(row[1]), float(row[2])))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        return cls.from_points(pts)


def _fmt(x: float) -> str:
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def _finish(points, keep_zero: bool) -> PersistenceDiagram:
    pd = PersistenceDiagram.from_points(points)
    return pd if keep_zero else pd.drop_zero()


def _dim0_survivors(roots: np.ndarray, component_of: np.ndarray, r_max: float):
    """Classes alive at ``r_max``: the elder per graph component is essential."""
    points = []
    seen = set()
    for r in sorted(set(roots.tolist())):
        comp = int(component_of[r])
        if comp in seen:
            points.append((0, 0.0, r_max, True))
        else:
            seen.add(comp)
            points.append((0, 0.0, np.inf, False))
    return points


def compute_persistence(fc: FilteredComplex, keep_zero: bool = False) -> PersistenceDiagram:
    """Persistence pairs of a filtered complex.

    Dimension 0 uses union-find over the edge stream; dimension 1 reduces the
    triangle boundary columns. Cycles that never die get ``death = r_max``
    and the ``truncated`` flag.
    """
    fc.check()
    n = fc.n_vertices
    killers, roots = kernels.h0_deaths(n, fc.edges)
    points = [(0, 0.0, float(fc.edge_times[e]), False) for e in killers.tolist()]
    points += _dim0_survivors(roots, fc.component_of, fc.r_max)

    n_edges = fc.edges.shape[0]
    negative = np.zeros(n_edges, dtype=bool)
    negative[killers] = True
    n_positive = n_edges - killers.shape[0]
    if n_positive and fc.triangles.shape[0]:
        idx = fc.edge_index()
        t = fc.triangles
        bnd = np.stack([idx[t[:, 0], t[:, 1]], idx[t[:, 0], t[:, 2]], idx[t[:, 1], t[:, 2]]], axis=1)
        pair_e, pair_t = kernels.reduce_h1(np.ascontiguousarray(bnd), n_edges, n_positive)
    else:
        pair_e = pair_t = np.zeros(0, dtype=np.int64)
    if pair_e.size and negative[pair_e].any():
        raise AssertionError("a component-merging edge was paired with a triangle")
    points += [
        (1, float(fc.edge_times[e]), float(fc.triangle_times[t]), False)
        for e, t in zip(pair_e.tolist(), pair_t.tolist())
    ]
    alive = ~negative
    alive[pair_e] = False
    points += [(1, float(fc.edge_times[e]), fc.r_max, True) for e in np.flatnonzero(alive).tolist()]
    return _finish(points, keep_zero)


def naive_persistence_oracle(fc: FilteredComplex, keep_zero: bool = False) -> PersistenceDiagram:
    """Textbook Z/2 reduction of the full boundary matrix.

    Meant for small complexes only; it shares nothing with
    :func:`compute_persistence` beyond the input stream.
    """
    stream = list(fc.simplices())
    position = {s.vertices: i for i, s in enumerate(stream)}
    for i, s in enumerate(stream):
        for f in _faces(s.vertices):
            if position[f] >= i:
                raise AssertionError(f"face {f} does not precede {s.vertices}")
    low_owner = {}
    reduced = []
    for j, s in enumerate(stream):
        col = 0
        for f in _faces(s.vertices):
            col ^= 1 << position[f]
        while col:
            low = col.bit_length() - 1
            if low not in low_owner:
                break
            col ^= reduced[low_owner[low]]
        reduced.append(col)
        if col:
            low_owner[col.bit_length() - 1] = j
    points = []
    paired = set()
    for low, j in low_owner.items():
        paired.add(low)
        paired.add(j)
        born = stream[low]
        points.append((born.dim, born.time, stream[j].time, False))
    unpaired_vertices = {}
    for i, s in enumerate(stream):
        if i in paired or reduced[i]:
            continue
        if s.dim == 0:
            comp = int(fc.component_of[s.vertices[0]])
            unpaired_vertices[comp] = unpaired_vertices.get(comp, 0) + 1
        elif s.dim == 1:
            points.append((1, s.time, fc.r_max, True))
    for count in unpaired_vertices.values():
        points.append((0, 0.0, np.inf, False))
        points += [(0, 0.0, fc.r_max, True)] * (count - 1)
    return _finish(points, keep_zero)


def _faces(vertices):
    if len(vertices) == 1:
        return []
    return [vertices[:i] + vertices[i + 1 :] for i in range(len(vertices))]

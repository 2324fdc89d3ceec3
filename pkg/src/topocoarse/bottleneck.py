"""Exact bottleneck distance between persistence diagrams."""

from __future__ import annotations

import numpy as np

from topocoarse import kernels
from topocoarse.persistence import PersistenceDiagram


class DiagramComparisonError(ValueError):
    pass


def _finite_points(pd: PersistenceDiagram | np.ndarray, dim: int) -> np.ndarray:
    if isinstance(pd, PersistenceDiagram):
        return pd.finite(dim)
    pts = np.asarray(pd, dtype=np.float64).reshape(-1, 2)
    return pts[np.isfinite(pts[:, 1])]


def _check_essential(a, b, dim):
    if isinstance(a, PersistenceDiagram) and isinstance(b, PersistenceDiagram):
        ea, eb = a.essential_count(dim), b.essential_count(dim)
        if ea != eb:
            raise DiagramComparisonError(
                f"essential class counts differ in dimension {dim}: {ea} vs {eb}"
            )


def linf_costs(pa: np.ndarray, pb: np.ndarray) -> np.ndarray:
    return np.maximum(
        np.abs(pa[:, None, 0] - pb[None, :, 0]),
        np.abs(pa[:, None, 1] - pb[None, :, 1]),
    )


def diagonal_costs(p: np.ndarray) -> np.ndarray:
    return (p[:, 1] - p[:, 0]) / 2


def _feasible(cross, diag_a, diag_b, t):
    na, nb = diag_a.size, diag_b.size
    adj = np.zeros((na + nb, nb + na), dtype=bool)
    adj[:na, :nb] = cross <= t
    adj[np.arange(na), nb + np.arange(na)] = diag_a <= t
    adj[na + np.arange(nb), np.arange(nb)] = diag_b <= t
    adj[na:, nb:] = True
    return kernels.has_perfect_matching(adj)


def bottleneck_points(pa: np.ndarray, pb: np.ndarray) -> float:
    """Bottleneck distance between two finite point sets (rows are (birth, death))."""
    pa = np.asarray(pa, dtype=np.float64).reshape(-1, 2)
    pb = np.asarray(pb, dtype=np.float64).reshape(-1, 2)
    if pa.shape[0] == 0 and pb.shape[0] == 0:
        return 0.0
    cross = linf_costs(pa, pb)
    diag_a, diag_b = diagonal_costs(pa), diagonal_costs(pb)
    candidates = np.unique(np.concatenate([cross.ravel(), diag_a, diag_b, [0.0]]))
    # the all-to-diagonal matching is always admissible at its own cost
    hi = int(np.searchsorted(candidates, max(diag_a.max(initial=0.0), diag_b.max(initial=0.0))))
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cross, diag_a, diag_b, candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def bottleneck_distance(a, b, dim: int | str = "max") -> float:
    """Bottleneck distance in one homology dimension, or the max over 0 and 1.

    Essential classes are set aside after checking that both diagrams have
    the same number of them; all are born at 0, so they match at zero cost.
    """
    if dim == "max":
        return max(bottleneck_distance(a, b, 0), bottleneck_distance(a, b, 1))
    dim = int(dim)
    _check_essential(a, b, dim)
    return bottleneck_points(_finite_points(a, dim), _finite_points(b, dim))


def bottleneck_oracle(a, b, dim: int = 1) -> float:
    """Exhaustive search over matchings with the diagonal; tiny inputs only."""
    _check_essential(a, b, dim)
    pa = [tuple(p) for p in _finite_points(a, dim).tolist()]
    pb = [tuple(p) for p in _finite_points(b, dim).tolist()]
    half_a = [(d - b_) / 2 for b_, d in pa]
    half_b = [(d - b_) / 2 for b_, d in pb]
    best = [np.inf]
    used = [False] * len(pb)

    def rec(i, worst):
        if worst >= best[0]:
            return
        if i == len(pa):
            rest = max([h for h, u in zip(half_b, used) if not u], default=0.0)
            best[0] = min(best[0], max(worst, rest))
            return
        rec(i + 1, max(worst, half_a[i]))
        for j, q in enumerate(pb):
            if not used[j]:
                used[j] = True
                c = max(abs(pa[i][0] - q[0]), abs(pa[i][1] - q[1]))
                rec(i + 1, max(worst, c))
                used[j] = False

    rec(0, 0.0)
    return float(best[0]) if best[0] != np.inf else 0.0

"""Similarity transforms x -> k R x + A of spatial graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from topocoarse.graph import SpatialGraph


@dataclass(frozen=True, eq=False)
class Similarity:
    R: np.ndarray
    A: np.ndarray
    k: float

    def __post_init__(self):
        R = np.atleast_2d(np.asarray(self.R, dtype=np.float64))
        A = np.asarray(self.A, dtype=np.float64).reshape(-1)
        if R.shape[0] != R.shape[1] or A.shape[0] != R.shape[0]:
            raise ValueError(f"shape mismatch: R {R.shape}, A {A.shape}")
        if not self.k > 0:
            raise ValueError(f"scale must be positive, got {self.k}")
        if not np.allclose(R.T @ R, np.eye(R.shape[0]), rtol=0, atol=1e-12):
            raise ValueError("R is not orthogonal")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "k", float(self.k))

    @property
    def dim(self) -> int:
        return self.R.shape[0]

    @classmethod
    def identity(cls, p: int) -> "Similarity":
        return cls(np.eye(p), np.zeros(p), 1.0)

    def apply_points(self, x: np.ndarray) -> np.ndarray:
        return self.k * np.asarray(x) @ self.R.T + self.A


def apply_similarity(g: SpatialGraph, s: Similarity) -> SpatialGraph:
    if s.dim != g.dim:
        raise ValueError(f"similarity acts on R^{s.dim} but graph lives in R^{g.dim}")
    return g.with_positions(s.apply_points(g.positions))


def random_similarity(p: int = 2, seed=None) -> Similarity:
    """Random orthogonal map (reflections included), translation and scale.

    Translation components are uniform on [-10, 10]; the scale is
    log-uniform on [0.1, 10].
    """
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    q = q * np.sign(np.diag(r))
    if rng.random() < 0.5:
        q[:, 0] = -q[:, 0]
    # one Gram-Schmidt pass in extended precision keeps R^T R = I at 1e-12
    q = _reorthonormalize(q)
    A = rng.uniform(-10.0, 10.0, p)
    k = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
    return Similarity(q, A, k)


def _reorthonormalize(q: np.ndarray) -> np.ndarray:
    out = np.array(q, dtype=np.longdouble)
    for j in range(out.shape[1]):
        for i in range(j):
            out[:, j] -= (out[:, i] @ out[:, j]) * out[:, i]
        out[:, j] /= np.sqrt(out[:, j] @ out[:, j])
    return out.astype(np.float64)

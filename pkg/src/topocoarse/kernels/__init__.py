"""Hot loops behind a backend switch.

The compiled numba path is used when numba imports and the environment
variable ``TOPOCOARSE_DISABLE_NUMBA`` is unset (or ``0``). Setting it to
``1`` selects the numpy/scipy path, which has identical contracts.
"""

import os
from types import ModuleType

from topocoarse.kernels import _numpy

try:
    from topocoarse.kernels import _numba
except ImportError:  # pragma: no cover - numba is optional
    _numba = None

__all__ = [
    "all_pairs_shortest_paths",
    "connected_components",
    "h0_deaths",
    "triangle_filtration",
    "reduce_h1",
    "has_perfect_matching",
    "backend",
    "set_backend",
]


def _default_backend() -> str:
    flag = os.environ.get("TOPOCOARSE_DISABLE_NUMBA", "").strip().lower()
    if _numba is None or flag not in ("", "0", "false", "no"):
        return "numpy"
    return "numba"


_active = _default_backend()


def backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and _numba is None:
        raise RuntimeError("numba is not installed")
    _active = name


def impl(name: str | None = None) -> ModuleType:
    name = name or _active
    return _numba if name == "numba" else _numpy


def all_pairs_shortest_paths(n, edges, weights, limit=float("inf")):
    return impl().all_pairs_shortest_paths(n, edges, weights, limit)


def connected_components(n, edges):
    return impl().connected_components(n, edges)


def h0_deaths(n, edges):
    return impl().h0_deaths(n, edges)


def triangle_filtration(dist, r_max, aware):
    return impl().triangle_filtration(dist, float(r_max), bool(aware))


def reduce_h1(boundaries, n_edges, n_positive):
    return impl().reduce_h1(boundaries, int(n_edges), int(n_positive))


def has_perfect_matching(adj):
    return impl().has_perfect_matching(adj)

import numpy as np
import pytest

from topocoarse import kernels
from topocoarse.graph import SpatialGraph


def random_graph(rng, n, edge_prob=0.5, dim=2, min_rel_gap=1e-6, weights=False):
    """Random points in the unit cube with a random edge subset.

    Redraws until no two edge lengths (and no pairwise distances) are within
    ``min_rel_gap`` of each other, so that rotations cannot flip comparisons.
    """
    while True:
        pos = rng.random((n, dim))
        iu, ju = np.triu_indices(n, k=1)
        keep = rng.random(iu.size) < edge_prob
        edges = np.stack([iu[keep], ju[keep]], axis=1)
        d = np.sort(np.linalg.norm(pos[iu] - pos[ju], axis=1))
        if d.size > 1 and np.min(np.diff(d) / d[1:]) < min_rel_gap:
            continue
        w = rng.uniform(0.5, 2.0, edges.shape[0]) if weights else None
        return SpatialGraph(pos, edges, w)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    before = kernels.backend()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(before)


@pytest.fixture
def path3():
    # a(0,0) - b(1,0) - c(3,0)
    return SpatialGraph([[0.0, 0.0], [1.0, 0.0], [3.0, 0.0]], [[0, 1], [1, 2]])


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """Store the outcome of an acceptance criterion for the summary lines."""

    def _record(number: int, ok: bool, detail: str = ""):
        ACCEPTANCE_RESULTS[number] = (bool(ok), detail)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")

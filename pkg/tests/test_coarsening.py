import numpy as np
import pytest

from topocoarse.coarsening import aggregate_custom_weights, coarsen, sub_graph
from topocoarse.graph import CUSTOM, LENGTH, SpatialGraph, edge_weights
from topocoarse.similarity import apply_similarity, random_similarity

from conftest import random_graph


def bfs_blocks(n, edges):
    """Components by breadth-first search, as sorted tuples."""
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, blocks = set(), []
    for s in range(n):
        if s in seen:
            continue
        comp, frontier = {s}, [s]
        while frontier:
            u = frontier.pop()
            for v in adj[u] - comp:
                comp.add(v)
                frontier.append(v)
        seen |= comp
        blocks.append(tuple(sorted(comp)))
    return sorted(blocks)


def test_sub_graph_threshold_is_inclusive():
    g = SpatialGraph([[0, 0], [1, 0], [3, 0], [6, 0]], [[0, 1], [1, 2], [2, 3]])
    assert sub_graph(g, LENGTH, 2.0).tolist() == [0, 1]
    assert sub_graph(g, LENGTH, 0.0).tolist() == []
    assert sub_graph(g, LENGTH, 3.0).tolist() == [0, 1, 2]


def test_average_positioning_hand_trace(path3):
    res = coarsen(path3, LENGTH, 1.5, "average")
    assert [b.tolist() for b in res.partition.blocks] == [[0, 1], [2]]
    assert res.coarse.edges.tolist() == [[0, 1]]
    np.testing.assert_array_equal(res.coarse.positions, [[0.5, 0.0], [3.0, 0.0]])


def test_degree_positioning_hand_trace(path3):
    res = coarsen(path3, LENGTH, 1.5, "degree")
    np.testing.assert_array_equal(res.coarse.positions, [[1.0, 0.0], [3.0, 0.0]])


def test_degree_ties_go_to_smallest_id():
    g = SpatialGraph([[0, 0], [1, 0]], [[0, 1]])
    res = coarsen(g, LENGTH, 1.0, "degree")
    np.testing.assert_array_equal(res.coarse.positions, [[0.0, 0.0]])


def test_below_min_weight_is_identity(rng):
    g = random_graph(rng, 15, 0.3)
    theta = edge_weights(g).min() / 2
    for positioning in ("average", "degree"):
        res = coarsen(g, LENGTH, theta, positioning)
        assert res.partition.block_of.tolist() == list(range(15))
        np.testing.assert_array_equal(res.coarse.positions, g.positions)
        assert sorted(map(tuple, res.coarse.edges.tolist())) == sorted(map(tuple, np.sort(g.edges, 1).tolist()))


def test_above_max_weight_collapses_each_component(rng):
    g = random_graph(rng, 20, 0.08)
    res = coarsen(g, LENGTH, edge_weights(g).max(), "average")
    assert res.coarse.n_nodes == g.n_components()
    assert res.coarse.n_edges == 0


def test_partition_matches_bfs(rng):
    for _ in range(30):
        g = random_graph(rng, int(rng.integers(2, 14)), rng.uniform(0.1, 0.7))
        w = edge_weights(g)
        theta = float(rng.choice(w)) if w.size else 0.0
        res = coarsen(g, LENGTH, theta)
        ours = sorted(tuple(b.tolist()) for b in res.partition.blocks)
        assert ours == bfs_blocks(g.n_nodes, g.edges[w <= theta].tolist())


def test_super_edges_brute_force(rng):
    for _ in range(30):
        g = random_graph(rng, int(rng.integers(2, 14)), rng.uniform(0.1, 0.7))
        w = edge_weights(g)
        theta = float(np.median(w)) if w.size else 0.0
        res = coarsen(g, LENGTH, theta)
        blocks = res.partition.blocks
        expected = set()
        for i in range(len(blocks)):
            for j in range(i + 1, len(blocks)):
                if any(
                    (u in blocks[i] and v in blocks[j]) or (v in blocks[i] and u in blocks[j])
                    for u, v in g.edges.tolist()
                ):
                    expected.add((i, j))
        assert set(map(tuple, res.coarse.edges.tolist())) == expected


def test_monotone_in_theta(rng):
    g = random_graph(rng, 25, 0.2)
    counts = [
        (coarsen(g, LENGTH, t).coarse.n_nodes, coarsen(g, LENGTH, t).coarse.n_edges)
        for t in np.sort(edge_weights(g))
    ]
    nodes, edges = zip(*counts)
    assert all(a >= b for a, b in zip(nodes, nodes[1:]))
    assert all(a >= b for a, b in zip(edges, edges[1:]))


@pytest.mark.parametrize("positioning", ["average", "degree"])
def test_parameter_equivariance(rng, positioning):
    for seed in range(20):
        g = random_graph(rng, 15, 0.3, dim=int(rng.choice([2, 3])))
        s = random_similarity(g.dim, seed)
        h = apply_similarity(g, s)
        # midway between two observed lengths so rounding cannot flip membership
        w = np.sort(edge_weights(g))
        i = int(rng.integers(0, w.size - 1))
        theta = float((w[i] + w[i + 1]) / 2)
        a = coarsen(g, LENGTH, theta, positioning)
        b = coarsen(h, LENGTH, s.k * theta, positioning)
        assert a.partition == b.partition
        np.testing.assert_array_equal(a.coarse.edges, b.coarse.edges)
        expected = s.apply_points(a.coarse.positions)
        scale = max(1.0, np.abs(expected).max())
        np.testing.assert_allclose(b.coarse.positions, expected, rtol=1e-9, atol=1e-9 * scale)


@pytest.mark.parametrize(
    "weights, rule, expected",
    [([2.0, 5.0], "min", 2.0), ([2.0, 5.0], "sum", 7.0), ([3.0], "min", 3.0), ([3.0], "sum", 3.0)],
)
def test_aggregate_custom_weights(weights, rule, expected):
    # two parallel crossings between blocks {0,1} and {2,3}
    pos = [[0, 0], [0, 1], [5, 0], [5, 1]]
    edges = [[0, 1], [2, 3], [0, 2], [1, 3]][: 2 + len(weights)]
    g = SpatialGraph(pos, edges, [0.1, 0.1] + weights)
    res = coarsen(g, CUSTOM, 0.5)
    assert res.coarse.n_nodes == 2
    assert aggregate_custom_weights(g, res, rule).tolist() == [expected]


def test_custom_weighting_drives_partition():
    g = SpatialGraph([[0, 0], [10, 0], [20, 0]], [[0, 1], [1, 2]], [0.1, 5.0])
    res = coarsen(g, CUSTOM, 1.0)
    assert res.partition.block_of.tolist() == [0, 0, 1]
    # coarse edges are still measured in space
    assert res.coarse.custom_weights is None
    np.testing.assert_allclose(edge_weights(res.coarse), [15.0])


def test_components_preserved(rng):
    for _ in range(40):
        g = random_graph(rng, int(rng.integers(2, 16)), rng.uniform(0.05, 0.5))
        for theta in np.unique(edge_weights(g)):
            assert coarsen(g, LENGTH, theta).coarse.n_components() == g.n_components()

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distperron.distance_matrix import (
    DisconnectedGraphError, bfs_distances, dump_matrix, graph_distance_matrix, matrix_from_entries,
    metric_distance_matrix, row_sums,
)
from distperron.graph_core import from_edges, gen_complete, gen_cycle, gen_erdos_renyi, gen_path, gen_sun, gen_broom
from distperron.metric_space import InvalidMetricError, FiniteMetric, gen_cluster_plus_point, metric_from_points

from conftest import floyd_warshall


def test_small_graphs():
    assert graph_distance_matrix(gen_path(3)).integer_view.tolist() == [[0, 1, 2], [1, 0, 1], [2, 1, 0]]
    k5 = graph_distance_matrix(gen_complete(5)).entries
    assert np.array_equal(k5, np.ones((5, 5)) - np.eye(5))
    c4 = graph_distance_matrix(gen_cycle(4)).integer_view
    # circulant: every row is a rotation of (0,1,2,1)
    for i in range(4):
        assert c4[i].tolist() == np.roll([0, 1, 2, 1], i).tolist()


def test_metric_matrices():
    assert metric_distance_matrix(metric_from_points([[0], [1]])).entries.tolist() == [[0, 1], [1, 0]]
    d = metric_distance_matrix(gen_cluster_plus_point(2, 0.5))
    assert d.entries.tolist() == [[0, .5, 1], [.5, 0, 1], [1, 1, 0]]
    assert d.integer_view is None
    e = metric_distance_matrix(metric_from_points([[0], [1], [3]]))
    assert e.entries.tolist() == [[0, 1, 3], [1, 0, 2], [3, 2, 0]]
    assert e.integer_view is not None  # integral metric tables keep an exact view


def test_row_sums():
    assert row_sums(graph_distance_matrix(gen_complete(4))).tolist() == [3] * 4
    assert row_sums(graph_distance_matrix(gen_path(3))).tolist() == [3, 2, 3]
    assert row_sums(graph_distance_matrix(gen_cycle(4))).tolist() == [4] * 4


def test_disconnected_names_pair():
    with pytest.raises(DisconnectedGraphError) as info:
        graph_distance_matrix(from_edges(4, [(0, 1), (2, 3)]))
    u, v = info.value.pair
    assert {u, v} & {0, 1} and {u, v} & {2, 3}
    assert str(v) in str(info.value)


def test_small_n_rejected():
    with pytest.raises(ValueError):
        graph_distance_matrix(gen_path(1))


def test_invalid_metric_rejected():
    with pytest.raises(InvalidMetricError):
        metric_distance_matrix(FiniteMetric(3, np.array([[0, 5, 1], [5, 0, 1], [1, 1, 0.0]])))


@pytest.mark.parametrize("bad", [
    [[0, 1], [2, 0]], [[1, 1], [1, 0]], [[0, -1], [-1, 0]], np.zeros((3, 3)), [[0, 1, 1]],
])
def test_matrix_from_entries_structure(bad):
    with pytest.raises(ValueError):
        matrix_from_entries(bad)


def test_read_only():
    d = graph_distance_matrix(gen_path(4))
    with pytest.raises(ValueError):
        d.entries[0, 1] = 7


def test_bfs_unreachable_marker():
    assert bfs_distances(from_edges(3, [(0, 1)]), 0) == [0, 1, -1]


@pytest.mark.parametrize("g", [gen_sun(7), gen_broom(5, 9), gen_cycle(13), gen_path(20)])
def test_bfs_matches_floyd_warshall_families(g):
    assert np.array_equal(graph_distance_matrix(g).entries, floyd_warshall(g))


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 40), st.floats(0.1, 1.0), st.integers(0, 2**64 - 1))
def test_bfs_matches_floyd_warshall_random(n, p, seed):
    g = gen_erdos_renyi(n, p, seed)
    fw = floyd_warshall(g)
    if np.isinf(fw).any():
        with pytest.raises(DisconnectedGraphError):
            graph_distance_matrix(g)
    else:
        assert np.array_equal(graph_distance_matrix(g).entries, fw)


def test_permutation_equivariance(rng):
    g = gen_broom(4, 5)
    perm = rng.permutation(g.n)
    a = graph_distance_matrix(g).permuted(perm)
    b = graph_distance_matrix(g.relabel(perm))
    assert np.array_equal(a.entries, b.entries)


def test_dump_integer_and_float():
    assert dump_matrix(graph_distance_matrix(gen_path(2))) == "2\n0 1\n1 0\n"
    assert "0.5" in dump_matrix(metric_distance_matrix(gen_cluster_plus_point(2, 0.5)))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 30), st.floats(0.1, 1.0), st.integers(0, 2**64 - 1))
def test_graph_metric_triangle_exact(n, p, seed):
    from distperron.metric_space import validate_metric
    try:
        d = graph_distance_matrix(gen_erdos_renyi(n, p, seed))
    except DisconnectedGraphError:
        return
    iv = d.integer_view
    assert np.all(iv[:, None, :] <= iv[:, :, None] + iv[None, :, :])
    assert validate_metric(iv).valid

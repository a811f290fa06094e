import numpy as np
import pytest

from distperron import graph_core as gc


def floyd_warshall(g: gc.Graph) -> np.ndarray:
    """Independent APSP oracle (O(n^3), inf for unreachable)."""
    d = np.full((g.n, g.n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v in g.edges():
        d[u, v] = d[v, u] = 1.0
    for k in range(g.n):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

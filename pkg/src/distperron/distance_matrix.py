"""Distance matrices of connected graphs (BFS all-pairs) and of finite metrics."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph_core import Graph
from .metric_space import FiniteMetric, InvalidMetricError, validate_metric, write_table

__all__ = [
    "DistanceMatrix",
    "DisconnectedGraphError",
    "graph_distance_matrix",
    "metric_distance_matrix",
    "matrix_from_entries",
    "bfs_distances",
    "row_sums",
    "max_row_sum",
    "dump_matrix",
]


class DisconnectedGraphError(ValueError):
    def __init__(self, u: int, v: int):
        self.pair = (u, v)
        super().__init__(f"graph is disconnected: vertex {v} unreachable from vertex {u}")


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric nonnegative matrix with zero diagonal.

    ``integer_view`` is an int64 copy of ``entries`` when every entry is
    integral (always for graph sources), otherwise ``None``.
    """

    n: int
    entries: np.ndarray
    integer_view: np.ndarray | None
    source: str

    def __post_init__(self):
        self.entries.setflags(write=False)
        if self.integer_view is not None:
            self.integer_view.setflags(write=False)

    def permuted(self, perm) -> "DistanceMatrix":
        """Matrix of the relabeled space where old point i becomes ``perm[i]``."""
        inv = np.argsort(perm)
        e = np.ascontiguousarray(self.entries[np.ix_(inv, inv)])
        iv = None if self.integer_view is None else np.ascontiguousarray(self.integer_view[np.ix_(inv, inv)])
        return DistanceMatrix(self.n, e, iv, self.source)


def _check(d: np.ndarray) -> None:
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    if np.any(np.diag(d) != 0):
        raise ValueError("distance matrix must have a zero diagonal")
    if np.any(d < 0) or not np.all(np.isfinite(d)):
        raise ValueError("distance matrix entries must be finite and nonnegative")
    if not np.array_equal(d, d.T):
        raise ValueError("distance matrix must be symmetric")
    if np.count_nonzero(d > 0) < 2:
        raise ValueError("distance matrix needs at least two positive entries (points not all identical)")


def matrix_from_entries(entries, source: str = "metric") -> DistanceMatrix:
    """Wrap a raw table after checking the structural invariants only."""
    d = np.array(entries, dtype=float)
    _check(d)
    iv = d.astype(np.int64) if np.all(d == np.round(d)) and d.max() < 2**53 else None
    return DistanceMatrix(d.shape[0], d, iv, source)


def bfs_distances(g: Graph, source: int) -> list[int]:
    """Hop distances from ``source``; unreachable vertices get -1."""
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


def graph_distance_matrix(g: Graph) -> DistanceMatrix:
    """All-pairs hop distances via one BFS per vertex."""
    if g.n < 2:
        raise ValueError(f"graph distance matrix needs n >= 2, got {g.n}")
    rows = []
    for s in range(g.n):
        row = bfs_distances(g, s)
        if -1 in row:
            raise DisconnectedGraphError(s, row.index(-1))
        rows.append(row)
    iv = np.array(rows, dtype=np.int64)
    return DistanceMatrix(g.n, iv.astype(float), iv, "graph")


def metric_distance_matrix(m: FiniteMetric) -> DistanceMatrix:
    report = validate_metric(m.dist)
    if not report.valid:
        raise InvalidMetricError(report)
    d = np.array(m.dist, dtype=float)
    if m.n < 2:
        raise ValueError("metric distance matrix needs at least 2 points")
    return matrix_from_entries(d, source="metric")


def row_sums(d: DistanceMatrix) -> np.ndarray:
    if d.integer_view is not None:
        return d.integer_view.sum(axis=1)
    return d.entries.sum(axis=1)


def max_row_sum(d: DistanceMatrix) -> float:
    return float(row_sums(d).max())


def dump_matrix(d: DistanceMatrix) -> str:
    return write_table(d.integer_view if d.integer_view is not None else d.entries)

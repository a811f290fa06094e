"""Finite metric spaces given by explicit distance tables.

A :class:`FiniteMetric` wraps an ``n x n`` table. Construction from outside
data goes through :func:`validate_metric`, which reports every violated
axiom with a witness instead of raising on the first one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "FiniteMetric",
    "InvalidMetricError",
    "Violation",
    "MetricReport",
    "SlackSummary",
    "TRIANGLE_RTOL",
    "metric_from_table",
    "metric_from_points",
    "gen_cluster_plus_point",
    "validate_metric",
    "triangle_slack_stats",
    "read_table",
    "write_table",
]

TRIANGLE_RTOL = 1e-9
_MAX_WITNESSES = 50


@dataclass(frozen=True)
class Violation:
    axiom: str  # shape, diagonal, nonnegative, symmetry, triangle, degenerate
    where: tuple[int, ...]
    detail: str


@dataclass
class MetricReport:
    violations: list[Violation] = field(default_factory=list)
    truncated: bool = False

    @property
    def valid(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.valid:
            return "valid metric"
        lines = [f"{v.axiom} at {v.where}: {v.detail}" for v in self.violations]
        if self.truncated:
            lines.append("... further violations omitted")
        return "\n".join(lines)


class InvalidMetricError(ValueError):
    def __init__(self, report: MetricReport):
        self.report = report
        super().__init__(f"invalid metric:\n{report}")


@dataclass(frozen=True, eq=False)
class FiniteMetric:
    n: int
    dist: np.ndarray

    def __post_init__(self):
        self.dist.setflags(write=False)


def validate_metric(table) -> MetricReport:
    """Check the metric axioms on a square table.

    Triangle violations use a slack of ``TRIANGLE_RTOL * max entry``. At most
    ``_MAX_WITNESSES`` witnesses are listed per axiom.
    """
    d = np.asarray(table, dtype=float)
    report = MetricReport()
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        report.violations.append(Violation("shape", tuple(d.shape), "table is not square"))
        return report
    n = d.shape[0]

    def add(axiom, pairs, describe):
        pairs = list(pairs)
        if len(pairs) > _MAX_WITNESSES:
            report.truncated = True
        for w in pairs[:_MAX_WITNESSES]:
            report.violations.append(Violation(axiom, tuple(int(i) for i in w), describe(*w)))

    if not np.all(np.isfinite(d)):
        add("nonnegative", zip(*np.nonzero(~np.isfinite(d))), lambda i, j: f"d={d[i, j]} not finite")
        return report
    add("diagonal", ((i,) for i in np.nonzero(np.diag(d) != 0)[0]), lambda i: f"d[{i}][{i}]={d[i, i]}")
    add("nonnegative", zip(*np.nonzero(d < 0)), lambda i, j: f"d={d[i, j]} < 0")
    ii, jj = np.nonzero(d != d.T)
    add("symmetry", ((i, j) for i, j in zip(ii, jj) if i < j),
        lambda i, j: f"d[{i}][{j}]={d[i, j]} != d[{j}][{i}]={d[j, i]}")
    if not np.any(d > 0):
        report.violations.append(Violation("degenerate", (), "all points coincide"))

    slack = TRIANGLE_RTOL * max(float(np.abs(d).max(initial=0.0)), 0.0)
    witnesses = []
    for k in range(n):
        bad = d > d[:, k][:, None] + d[k, :][None, :] + slack
        if bad.any():
            for i, j in zip(*np.nonzero(bad)):
                witnesses.append((i, j, k))
                if len(witnesses) > _MAX_WITNESSES:
                    break
        if len(witnesses) > _MAX_WITNESSES:
            break
    add("triangle", witnesses,
        lambda i, j, k: f"d[{i}][{j}]={d[i, j]} > d[{i}][{k}] + d[{k}][{j}] = {d[i, k] + d[k, j]}")
    return report


def metric_from_table(table) -> FiniteMetric:
    """Validated :class:`FiniteMetric` from any square array-like."""
    report = validate_metric(table)
    if not report.valid:
        raise InvalidMetricError(report)
    d = np.array(table, dtype=float)
    return FiniteMetric(d.shape[0], d)


def metric_from_points(points: Sequence[Sequence[float]], norm: str = "euclidean") -> FiniteMetric:
    """Distances between coordinate vectors under the chosen norm."""
    try:
        x = np.asarray(points, dtype=float)
    except ValueError:
        raise ValueError("points must all have the same dimension") from None
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError("points must all have the same dimension")
    if x.shape[0] < 2:
        raise ValueError(f"need at least 2 points, got {x.shape[0]}")
    diff = x[:, None, :] - x[None, :, :]
    if norm == "euclidean":
        d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    elif norm == "manhattan":
        d = np.abs(diff).sum(axis=2)
    elif norm == "chebyshev":
        d = np.abs(diff).max(axis=2)
    else:
        raise ValueError(f"unknown norm {norm!r}")
    if not np.any(d > 0):
        raise ValueError("all points are identical")
    return metric_from_table(d)


def gen_cluster_plus_point(n_cluster: int, eps: float) -> FiniteMetric:
    """``n_cluster`` points at mutual distance ``eps`` plus one point at distance 1.

    The far point has the last index. Accepted for ``0 <= eps <= 1/2``.
    """
    if n_cluster < 1:
        raise ValueError(f"n_cluster must be >= 1, got {n_cluster}")
    if not 0 <= eps <= 0.5:
        raise ValueError(f"eps must lie in [0, 1/2], got {eps}")
    n = n_cluster + 1
    d = np.full((n, n), float(eps))
    d[-1, :] = 1.0
    d[:, -1] = 1.0
    np.fill_diagonal(d, 0.0)
    # metric by construction; skip the O(n^3) triangle scan
    return FiniteMetric(n, d)


@dataclass(frozen=True)
class SlackSummary:
    """v-weighted triangle slack at each pivot point k.

    ``per_point[k]`` is the average of ``d(i,k) + d(k,j) - d(i,j)`` over
    pairs (i, j) weighted by ``v_i v_j``.
    """

    per_point: np.ndarray
    min: float
    argmin: int
    mean: float
    max: float


def triangle_slack_stats(d, v) -> SlackSummary:
    d = getattr(d, "dist", getattr(d, "entries", d))
    d = np.asarray(d, dtype=float)
    v = np.asarray(v, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1] or v.shape != (d.shape[0],):
        raise ValueError(f"dimension mismatch: matrix {d.shape}, vector {v.shape}")
    if np.any(v < 0):
        raise ValueError("weight vector must be nonnegative")
    s = v.sum()
    # sum_ij v_i v_j (d_ik + d_kj - d_ij) = 2 (sum v) (Dv)_k - v'Dv
    dv = d @ v
    raw = 2.0 * s * dv - v @ dv
    per = raw / (s * s)
    k = int(np.argmin(per))
    return SlackSummary(per, float(per[k]), k, float(per.mean()), float(per.max()))


def read_table(text: str) -> np.ndarray:
    """Parse ``n`` followed by ``n`` rows of ``n`` reals."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty table")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ValueError(f"expected point count on first line, got {lines[0]!r}") from None
    if n < 1:
        raise ValueError(f"point count must be positive, got {n}")
    if len(lines) - 1 != n:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        try:
            row = [float(tok) for tok in ln.split()]
        except ValueError:
            raise ValueError(f"line {i}: non-numeric entry") from None
        if len(row) != n:
            raise ValueError(f"line {i}: expected {n} entries, got {len(row)}")
        rows.append(row)
    return np.array(rows, dtype=float)


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def write_table(table) -> str:
    d = np.asarray(table)
    out = [str(d.shape[0])]
    out.extend(" ".join(_fmt(x) for x in row) for row in d)
    return "\n".join(out) + "\n"

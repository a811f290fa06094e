"""Monte Carlo unsolvability rates over G(n, p) and Perron statistics over graph corpora.

Everything here is deterministic given its seed. Trial seeds are derived
with a splitmix64 mix of ``(master_seed, p_index, trial_index, attempt)``,
so results do not depend on the number of worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from statistics import NormalDist
from typing import Iterable, Sequence

import numpy as np

from .distance_matrix import DistanceMatrix, graph_distance_matrix, metric_distance_matrix
from .graph_core import Graph, gen_erdos_renyi, gen_family, is_connected
from .metric_space import metric_from_points
from .solver import prop1_condition, solve_exact, solve_float
from .spectral import SPECTRUM_CAP, analyze, verify_theorem

__all__ = [
    "MASK64",
    "splitmix64",
    "derive_seed",
    "wilson_interval",
    "McConfig",
    "McRecord",
    "McResult",
    "run_mc_unsolvability",
    "MatrixAudit",
    "audit_matrix",
    "ScanRecord",
    "scan_graph",
    "family_params_for_size",
    "family_corpus",
    "er_corpus",
    "point_cloud_corpus",
    "run_family_scan",
    "run_graph_scan",
    "summarize_scan",
    "CSV_COLUMNS",
    "export_csv",
    "export_json",
    "parse_csv",
    "parse_json",
    "DEFAULT_P_GRID",
]

MASK64 = 0xFFFFFFFFFFFFFFFF
DEFAULT_P_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))
RESAMPLE_CAP = 1000


def splitmix64(x: int) -> int:
    """One step of the splitmix64 output function."""
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(master: int, *indices: int) -> int:
    h = splitmix64(master & MASK64)
    for i in indices:
        h = splitmix64(h ^ (i & MASK64))
    return h


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion ``k / n``."""
    if n == 0:
        return (0.0, 1.0)
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    z2 = z * z
    phat = k / n
    denom = 1.0 + z2 / n
    center = (phat + z2 / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom
    lo = 0.0 if k == 0 else max(0.0, center - half)
    hi = 1.0 if k == n else min(1.0, center + half)
    return (lo, hi)


# --------------------------------------------------------------------------
# per-matrix analysis shared by the MC harness and the scans


@dataclass
class MatrixAudit:
    """Everything computed about one distance matrix."""

    n: int
    lambda1: float
    lambda2: float | None
    min_entry: float
    alignment: float
    margin1: float
    margin2: float
    theorem_ok: bool
    prop1_lhs: float | None
    prop1_rhs: float | None
    prop1_holds: bool | None
    solvable: bool
    float_solvable: bool
    eig_sum: float | None  # |sum of eigenvalues| / lambda1
    rank_D: int
    exact: bool


def audit_matrix(d: DistanceMatrix, spectrum: bool = True) -> MatrixAudit:
    s = analyze(d, spectrum=spectrum and d.n <= SPECTRUM_CAP)
    verdict = verify_theorem(s)
    if s.spectrum_complete:
        p1 = prop1_condition(d, spectrum=s.spectrum, perron=s.perron)
        lhs, rhs, holds = p1.lhs, p1.rhs, p1.condition_holds
        eig_sum = abs(float(s.spectrum.sum())) / s.lambda1
    else:
        lhs = rhs = holds = eig_sum = None
    fl = solve_float(d)
    if d.integer_view is not None:
        ex = solve_exact(d)
        solvable, rank, exact = ex.consistent, ex.rank_D, True
    else:
        solvable, rank, exact = fl.consistent, fl.rank_D, False
    return MatrixAudit(d.n, s.lambda1, s.lambda2, s.min_entry, s.alignment,
                       verdict.min_entry_margin, verdict.alignment_margin, verdict.passed,
                       lhs, rhs, holds, solvable, fl.consistent, eig_sum, rank, exact)


# --------------------------------------------------------------------------
# Monte Carlo over G(n, p)


@dataclass(frozen=True)
class McConfig:
    n: int = 50
    p_grid: tuple[float, ...] = DEFAULT_P_GRID
    trials_per_p: int = 100
    master_seed: int = 0
    connectivity_policy: str = "reject_resample"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.trials_per_p < 1:
            raise ValueError("trials_per_p must be >= 1")
        if not self.p_grid or any(not 0 < p < 1 for p in self.p_grid):
            raise ValueError(f"p_grid values must lie in (0, 1), got {self.p_grid}")
        if self.connectivity_policy not in ("reject_resample", "skip"):
            raise ValueError(f"unknown connectivity policy {self.connectivity_policy!r}")


@dataclass
class McRecord:
    p: float
    attempted: int
    connected: int
    unsolvable_count: int
    rate: float | None
    wilson_95_interval: tuple[float, float]
    prop1_holds: int = 0
    prop1_violations: int = 0
    float_disagreements: int = 0
    max_eig_sum: float = 0.0
    unsolvable_seeds: list[int] = field(default_factory=list)


@dataclass
class McResult:
    config: McConfig
    records: list[McRecord]
    runtime: float = field(default=0.0, compare=False)

    @property
    def max_rate(self) -> float:
        return max((r.rate for r in self.records if r.rate is not None), default=0.0)

    def to_json(self) -> dict:
        return {
            "config": asdict(self.config),
            "records": [asdict(r) for r in self.records],
            "runtime": self.runtime,
        }


def _mc_trial(args):
    n, p, master, p_idx, t_idx, policy, audit = args
    cap = RESAMPLE_CAP if policy == "reject_resample" else 1
    for attempt in range(cap):
        seed = derive_seed(master, p_idx, t_idx, attempt)
        g = gen_erdos_renyi(n, p, seed)
        if is_connected(g):
            break
    else:
        return attempt + 1, None
    d = graph_distance_matrix(g)
    if audit:
        a = audit_matrix(d)
        return attempt + 1, (seed, a.solvable, a.prop1_holds, a.float_solvable, a.eig_sum)
    return attempt + 1, (seed, solve_exact(d).consistent, None, None, None)


def run_mc_unsolvability(cfg: McConfig, workers: int = 1, audit: bool = True) -> McResult:
    """Estimate P(D x = 1 unsolvable) for connected G(n, p) at each p.

    With ``audit`` every connected sample also goes through the spectral
    criterion (counting cases where it holds though the system is
    unsolvable) and the floating-point solver (counting verdict mismatches).
    """
    start = time.perf_counter()
    tasks = [(cfg.n, p, cfg.master_seed, i, t, cfg.connectivity_policy, audit)
             for i, p in enumerate(cfg.p_grid) for t in range(cfg.trials_per_p)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            outcomes = list(ex.map(_mc_trial, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        outcomes = [_mc_trial(t) for t in tasks]

    records = []
    per_p = cfg.trials_per_p
    for i, p in enumerate(cfg.p_grid):
        chunk = outcomes[i * per_p:(i + 1) * per_p]
        attempted = sum(a for a, _ in chunk)
        done = [o for _, o in chunk if o is not None]
        bad = [o for o in done if not o[1]]
        rec = McRecord(
            p=p, attempted=attempted, connected=len(done), unsolvable_count=len(bad),
            rate=len(bad) / len(done) if done else None,
            wilson_95_interval=wilson_interval(len(bad), len(done)),
            unsolvable_seeds=[o[0] for o in bad],
        )
        if audit:
            rec.prop1_holds = sum(1 for o in done if o[2])
            rec.prop1_violations = sum(1 for o in done if o[2] and not o[1])
            rec.float_disagreements = sum(1 for o in done if o[3] != o[1])
            rec.max_eig_sum = max((o[4] for o in done if o[4] is not None), default=0.0)
        records.append(rec)
    return McResult(cfg, records, time.perf_counter() - start)


# --------------------------------------------------------------------------
# corpora and scans


@dataclass
class ScanRecord:
    family: str
    params: str
    n: int
    lambda1: float | None = None
    lambda2: float | None = None
    min_entry: float | None = None
    alignment: float | None = None
    margin1: float | None = None
    margin2: float | None = None
    prop1_lhs: float | None = None
    prop1_rhs: float | None = None
    prop1_holds: bool | None = None
    solvable: bool | None = None
    skip_reason: str | None = None


CSV_COLUMNS = ("family", "params", "n", "lambda1", "lambda2", "min_entry", "alignment",
               "margin1", "margin2", "prop1_lhs", "prop1_rhs", "prop1_holds", "solvable")


def _params_str(params: dict) -> str:
    return ";".join(f"{k}={v}" for k, v in params.items())


def scan_graph(family: str, params: dict | str, g: Graph) -> ScanRecord:
    """Analyze one graph; failures become a record with ``skip_reason`` set."""
    pstr = params if isinstance(params, str) else _params_str(params)
    rec = ScanRecord(family, pstr, g.n)
    try:
        a = audit_matrix(graph_distance_matrix(g))
    except Exception as exc:  # recorded per row, the scan continues
        rec.skip_reason = f"{type(exc).__name__}: {exc}"
        return rec
    rec.lambda1, rec.lambda2 = a.lambda1, a.lambda2
    rec.min_entry, rec.alignment = a.min_entry, a.alignment
    rec.margin1, rec.margin2 = a.margin1, a.margin2
    rec.prop1_lhs, rec.prop1_rhs, rec.prop1_holds = a.prop1_lhs, a.prop1_rhs, a.prop1_holds
    rec.solvable = a.solvable
    if a.lambda2 is None:
        rec.skip_reason = "spectrum skipped: n above full-spectrum cap"
    return rec


def family_params_for_size(family: str, n: int) -> list[dict]:
    """Parameter sets of ``family`` with (about) ``n`` vertices.

    Sun graphs have even order, so ``h = n // 2``. Brooms get several
    tail lengths at total order exactly ``n``.
    """
    if family in ("path", "complete"):
        return [{"n": n}] if n >= 2 else []
    if family == "cycle":
        return [{"n": n}] if n >= 3 else []
    if family == "star":
        return [{"leaves": n - 1}] if n >= 2 else []
    if family == "sun":
        return [{"h": n // 2}] if n >= 6 else []
    if family == "broom":
        if n < 3:
            return []
        tails = sorted({t for t in (1, 2, n // 8, n // 4, n // 3, n // 2, (3 * n) // 4, n - 2)
                        if 1 <= t <= n - 2})
        return [{"leaves": n - 1 - t, "tail": t} for t in tails]
    raise ValueError(f"unknown family {family!r}")


def family_corpus(max_n: int = 200, families: Sequence[str] = ("path", "star", "cycle", "complete", "sun", "broom"),
                  broom_grid: Sequence[int] = (1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144)):
    """Every path, star, cycle, complete and sun graph with at most ``max_n``
    vertices, plus brooms with leaves and tail drawn from ``broom_grid``.

    Yields ``(family, params, graph)``.
    """
    for fam in families:
        if fam == "broom":
            for s in broom_grid:
                for t in broom_grid:
                    if s + t + 1 <= max_n:
                        yield fam, {"leaves": s, "tail": t}, gen_family(fam, leaves=s, tail=t)
            continue
        if fam == "sun":
            for h in range(3, max_n // 2 + 1):
                yield fam, {"h": h}, gen_family(fam, h=h)
            continue
        lo = 3 if fam == "cycle" else 2
        for n in range(lo, max_n + 1):
            params = {"leaves": n - 1} if fam == "star" else {"n": n}
            yield fam, params, gen_family(fam, **params)


def er_corpus(count: int = 500, n_range: tuple[int, int] = (5, 100), seed: int = 0):
    """``count`` connected G(n, p) samples with n and p drawn per sample.

    p is drawn above the connectivity threshold ``log(n)/n`` so rejections
    stay rare. Yields ``("er", params, graph)``.
    """
    rng = np.random.default_rng(seed & MASK64)
    made = 0
    attempt = 0
    while made < count:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        lo = min(0.9, 1.2 * math.log(n) / n)
        p = float(rng.uniform(lo, 0.95))
        gseed = derive_seed(seed, attempt)
        attempt += 1
        g = gen_erdos_renyi(n, p, gseed)
        if not is_connected(g):
            continue
        made += 1
        yield "er", {"n": n, "p": round(p, 6), "seed": gseed}, g


def point_cloud_corpus(count: int = 100, seed: int = 0, n_range: tuple[int, int] = (3, 60)):
    """Random point clouds in dimension 1..5 under rotating norms; yields distance matrices."""
    rng = np.random.default_rng(seed & MASK64)
    norms = ("euclidean", "manhattan", "chebyshev")
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        dim = int(rng.integers(1, 6))
        pts = rng.standard_normal((n, dim)) if i % 2 else rng.uniform(0, 1, (n, dim))
        norm = norms[i % 3]
        m = metric_from_points(pts, norm)
        yield "points", {"n": n, "dim": dim, "norm": norm}, metric_distance_matrix(m)


def _scan_task(item):
    fam, params, g = item
    return scan_graph(fam, params, g)


def run_graph_scan(items: Iterable[tuple[str, dict | str, Graph]], workers: int = 1) -> list[ScanRecord]:
    items = list(items)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_scan_task, items, chunksize=max(1, len(items) // (8 * workers))))
    return [_scan_task(it) for it in items]


def run_family_scan(families: Sequence[str], sizes: Sequence[int], workers: int = 1) -> list[ScanRecord]:
    """One record per (family, parameter set) at each requested size."""
    items = []
    for fam in families:
        for n in sizes:
            for params in family_params_for_size(fam, n):
                items.append((fam, params, gen_family(fam, **params)))
    return run_graph_scan(items, workers)


def summarize_scan(records: Sequence[ScanRecord]) -> dict:
    ok = [r for r in records if r.alignment is not None]
    if not ok:
        return {"count": len(records), "analyzed": 0}
    worst = min(ok, key=lambda r: r.alignment)
    return {
        "count": len(records),
        "analyzed": len(ok),
        "mean_alignment": sum(r.alignment for r in ok) / len(ok),
        "min_alignment": worst.alignment,
        "argmin": f"{worst.family}({worst.params})",
        "theorem_failures": sum(1 for r in ok if r.margin1 < -1e-9 or r.margin2 < -1e-9),
        "unsolvable": sum(1 for r in ok if r.solvable is False),
        "prop1_holds": sum(1 for r in ok if r.prop1_holds),
        "prop1_violations": sum(1 for r in ok if r.prop1_holds and r.solvable is False),
    }


# --------------------------------------------------------------------------
# export


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def export_csv(records: Sequence[ScanRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([_cell(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def _parse_cell(name: str, s: str):
    if s == "":
        return None
    if name in ("family", "params", "skip_reason"):
        return s
    if name == "n":
        return int(s)
    if name in ("prop1_holds", "solvable"):
        return s == "true"
    return float(s)


def parse_csv(text: str) -> list[ScanRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ValueError("unexpected CSV header")
    return [ScanRecord(**{c: _parse_cell(c, v) for c, v in zip(CSV_COLUMNS, row)}) for row in rows[1:]]


def export_json(records: Sequence[ScanRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=1)


def parse_json(text: str) -> list[ScanRecord]:
    return [ScanRecord(**obj) for obj in json.loads(text)]

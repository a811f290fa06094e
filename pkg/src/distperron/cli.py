"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (disconnected graph, invalid
metric, non-convergence, ...), 2 on usage errors. ``verify`` exits 0 only
when both eigenvector bounds hold.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import asymptotics as asy
from .distance_matrix import DistanceMatrix, dump_matrix, graph_distance_matrix, metric_distance_matrix
from .experiments import (
    DEFAULT_P_GRID,
    McConfig,
    er_corpus,
    export_csv,
    export_json,
    family_params_for_size,
    run_graph_scan,
    run_mc_unsolvability,
    summarize_scan,
)
from .graph_core import FAMILIES, Graph, GraphError, gen_erdos_renyi, gen_family, read_graph, write_graph
from .metric_space import InvalidMetricError, gen_cluster_plus_point, metric_from_table, read_table
from .solver import prop1_condition, solve_exact, solve_float
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, ConvergenceError, SpectrumTooLargeError, analyze, verify_theorem

DOMAIN_ERRORS = (GraphError, InvalidMetricError, ConvergenceError, SpectrumTooLargeError, ValueError, OSError)


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=FAMILIES + ("er",), help="graph family to generate")
    p.add_argument("--n", type=int, help="vertex count (path, cycle, complete, er)")
    p.add_argument("--leaves", type=int, help="leaf count (star, broom)")
    p.add_argument("--tail", type=int, help="tail length (broom)")
    p.add_argument("--hub", type=int, help="hub size h (sun)")
    p.add_argument("--p", type=float, help="edge probability (er)")
    p.add_argument("--seed", type=int, default=0, help="random seed (er)")


def _add_source_flags(p: argparse.ArgumentParser) -> None:
    _add_family_flags(p)
    p.add_argument("--graph", type=Path, help="edge-list file")
    p.add_argument("--metric", type=Path, help="distance table file")
    p.add_argument("--cluster", type=int, help="cluster size of the cluster-plus-far-point metric")
    p.add_argument("--eps", type=float, default=0.0, help="intra-cluster distance for --cluster")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--out", type=Path, help="write output to this file instead of stdout")


def _add_iter_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative eigen-residual target")
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER, help="power iteration cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distperron", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph as an edge list")
    _add_family_flags(p)
    _add_common(p)

    for name, text in (("distmat", "print the distance matrix"),
                       ("spectrum", "Perron eigenpair and second eigenvalue"),
                       ("verify", "check the Perron vector bounds"),
                       ("solve", "decide solvability of D x = 1"),
                       ("prop1", "evaluate the spectral solvability criterion")):
        p = sub.add_parser(name, help=text)
        _add_source_flags(p)
        _add_common(p)
        if name in ("spectrum", "verify", "prop1"):
            _add_iter_flags(p)
        if name == "solve":
            p.add_argument("--float", dest="floating", action="store_true",
                           help="use the least-squares solver even for integer matrices")

    p = sub.add_parser("asymptotics", help="path, sun and star constants")
    p.add_argument("--path-limit", action="store_true", help="c and the path-graph limit constant")
    p.add_argument("--sun-limit", action="store_true", help="sun-graph limit constant")
    p.add_argument("--n", type=int, help="also solve the theta equation for P_n")
    p.add_argument("--leaves", type=int, help="star center-entry expansion for this many leaves")
    _add_common(p)

    p = sub.add_parser("mc", help="Monte Carlo rate of unsolvable D x = 1 over G(n, p)")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--p", type=_floats, default=list(DEFAULT_P_GRID), help="comma-separated probabilities")
    p.add_argument("--trials", type=int, default=100, help="connected trials per p")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.add_argument("--policy", choices=("reject_resample", "skip"), default="reject_resample")
    p.add_argument("--no-audit", action="store_true", help="skip the spectral/floating cross-checks")
    _add_common(p)

    p = sub.add_parser("scan", help="Perron statistics over graph families or edge-list files")
    p.add_argument("--family", type=lambda s: s.split(","), help="comma-separated families (default: all six)")
    p.add_argument("--n", type=_ints, default=[20, 40, 60], help="comma-separated target sizes")
    p.add_argument("--graph", type=Path, nargs="+", help="edge-list files to scan instead of families")
    p.add_argument("--trials", type=int, default=0, help="also scan this many connected G(n, p) samples")
    p.add_argument("--seed", type=int, default=0, help="seed for the G(n, p) samples")
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    _add_common(p)
    return parser


def _graph_from_flags(a) -> Graph:
    fam = a.family
    if fam is None:
        raise UsageError("no graph source given (use --family, --graph, --metric or --cluster)")
    try:
        if fam in ("path", "cycle", "complete"):
            return gen_family(fam, n=_need(a.n, "--n"))
        if fam == "star":
            return gen_family(fam, leaves=_need(a.leaves, "--leaves"))
        if fam == "sun":
            return gen_family(fam, h=_need(a.hub, "--hub"))
        if fam == "broom":
            return gen_family(fam, leaves=_need(a.leaves, "--leaves"), tail=_need(a.tail, "--tail"))
        return gen_erdos_renyi(_need(a.n, "--n"), _need(a.p, "--p"), a.seed)
    except TypeError as exc:
        raise UsageError(str(exc)) from None


def _need(value, flag):
    if value is None:
        raise UsageError(f"missing required flag {flag}")
    return value


def _matrix_from_flags(a) -> DistanceMatrix:
    given = [x for x in (a.graph, a.metric, a.cluster, a.family) if x is not None]
    if len(given) > 1:
        raise UsageError("give exactly one of --graph, --metric, --cluster, --family")
    if a.graph is not None:
        return graph_distance_matrix(read_graph(a.graph.read_text()))
    if a.metric is not None:
        return metric_distance_matrix(metric_from_table(read_table(a.metric.read_text())))
    if a.cluster is not None:
        return metric_distance_matrix(gen_cluster_plus_point(a.cluster, a.eps))
    return graph_distance_matrix(_graph_from_flags(a))


def _emit(a, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(a, "out", None):
        a.out.write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _cmd_gen(a) -> int:
    g = _graph_from_flags(a)
    if a.json:
        _emit(a, _dumps({"n": g.n, "edges": [list(e) for e in g.edges()]}))
    else:
        _emit(a, write_graph(g))
    return 0


def _cmd_distmat(a) -> int:
    d = _matrix_from_flags(a)
    if a.json:
        rows = d.integer_view.tolist() if d.integer_view is not None else d.entries.tolist()
        _emit(a, _dumps({"n": d.n, "source": d.source, "entries": rows}))
    else:
        _emit(a, dump_matrix(d))
    return 0


def _summary_lines(s) -> list[str]:
    lam2 = "n/a" if s.lambda2 is None else f"{s.lambda2:.12g}"
    return [
        f"n          {s.n}",
        f"lambda1    {s.lambda1:.12g}",
        f"lambda2    {lam2}",
        f"min_entry  {s.min_entry:.12g}",
        f"alignment  {s.alignment:.12g}",
        f"residual   {s.residual:.3e}",
        f"iterations {s.iterations}",
    ]


def _cmd_spectrum(a) -> int:
    s = analyze(_matrix_from_flags(a), tol=a.tol, max_iter=a.max_iter)
    _emit(a, _dumps(s.to_json()) if a.json else "\n".join(_summary_lines(s)))
    return 0


def _cmd_verify(a) -> int:
    s = analyze(_matrix_from_flags(a), spectrum=False, tol=a.tol, max_iter=a.max_iter)
    v = verify_theorem(s)
    if a.json:
        out = s.to_json() | {"margin1": v.min_entry_margin, "margin2": v.alignment_margin, "passed": v.passed}
        _emit(a, _dumps(out))
    else:
        lines = _summary_lines(s) + [
            f"margin min_entry - 1/(2 sqrt n)   {v.min_entry_margin:.6e}",
            f"margin alignment - 1/sqrt 2       {v.alignment_margin:.6e}",
            "PASS" if v.passed else "FAIL",
        ]
        _emit(a, "\n".join(lines))
    return 0 if v.passed else 1


def _cmd_solve(a) -> int:
    d = _matrix_from_flags(a)
    report = solve_exact(d) if d.integer_view is not None and not a.floating else solve_float(d)
    _emit(a, _dumps(report.to_json()))
    return 0


def _cmd_prop1(a) -> int:
    d = _matrix_from_flags(a)
    s = analyze(d, tol=a.tol, max_iter=a.max_iter)
    if not s.spectrum_complete:
        raise SpectrumTooLargeError(f"n={d.n} exceeds the full-spectrum cap; criterion unavailable")
    r = prop1_condition(d, spectrum=s.spectrum, perron=s.perron)
    if a.json:
        _emit(a, _dumps(r.to_json()))
    else:
        _emit(a, "\n".join(f"{k:14s} {v}" for k, v in r.to_json().items()))
    return 0


def _cmd_asymptotics(a) -> int:
    show_all = not (a.path_limit or a.sun_limit or a.n or a.leaves)
    out: dict = {}
    if a.path_limit or show_all:
        out["c"] = asy.solve_c()
        out["limit_constant"] = asy.path_limit_constant()
    if a.sun_limit or show_all:
        out["sun_limit"] = asy.sun_limit_constant()
    if a.n is not None:
        pa = asy.path_asymptotics(a.n)
        out["theta"] = pa.theta
        out["scaled_theta"] = pa.scaled_theta
        out["finite_alignment"] = pa.finite_alignment
    if a.leaves is not None:
        out["star_min_entry_expansion"] = asy.star_min_entry_expansion(a.leaves)
    if a.json:
        _emit(a, _dumps(out))
    else:
        _emit(a, "\n".join(f"{k:26s} {v:.12g}" for k, v in out.items()))
    return 0


def _cmd_mc(a) -> int:
    cfg = McConfig(n=a.n, p_grid=tuple(a.p), trials_per_p=a.trials, master_seed=a.seed,
                   connectivity_policy=a.policy)
    res = run_mc_unsolvability(cfg, workers=a.threads, audit=not a.no_audit)
    if a.json:
        payload = res.to_json()
        payload.pop("runtime")
        _emit(a, _dumps(payload))
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "attempted", "connected", "unsolvable_count", "rate", "wilson_lo", "wilson_hi",
                "prop1_holds", "prop1_violations", "float_disagreements"])
    for r in res.records:
        w.writerow([repr(r.p), r.attempted, r.connected, r.unsolvable_count,
                    "" if r.rate is None else repr(r.rate), repr(r.wilson_95_interval[0]),
                    repr(r.wilson_95_interval[1]), r.prop1_holds, r.prop1_violations, r.float_disagreements])
    _emit(a, buf.getvalue())
    return 0


def _cmd_scan(a) -> int:
    items = []
    if a.graph:
        for path in a.graph:
            items.append(("file", path.name, read_graph(path.read_text())))
    else:
        fams = a.family or list(FAMILIES)
        for fam in fams:
            if fam not in FAMILIES:
                raise UsageError(f"unknown family {fam!r}")
            for n in a.n:
                for params in family_params_for_size(fam, n):
                    items.append((fam, params, gen_family(fam, **params)))
    if a.trials:
        items.extend(er_corpus(a.trials, (max(5, min(a.n)), max(a.n)), seed=a.seed))
    records = run_graph_scan(items, workers=a.threads)
    if a.json:
        _emit(a, _dumps({"summary": summarize_scan(records), "records": json.loads(export_json(records))}))
    else:
        _emit(a, export_csv(records))
    return 0


COMMANDS = {
    "gen": _cmd_gen,
    "distmat": _cmd_distmat,
    "spectrum": _cmd_spectrum,
    "verify": _cmd_verify,
    "solve": _cmd_solve,
    "prop1": _cmd_prop1,
    "asymptotics": _cmd_asymptotics,
    "mc": _cmd_mc,
    "scan": _cmd_scan,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"{parser.prog} {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

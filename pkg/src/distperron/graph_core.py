"""Simple undirected graphs, the graph families used throughout the package,
seeded Erdős–Rényi sampling and a plain edge-list text format.

Vertex ids are 0-indexed. Generators document which id plays a special
role (star/broom center, sun hub) so callers can address Perron entries.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "GraphParseError",
    "FAMILIES",
    "from_edges",
    "validate_graph",
    "gen_path",
    "gen_star",
    "gen_cycle",
    "gen_complete",
    "gen_sun",
    "gen_broom",
    "gen_erdos_renyi",
    "gen_family",
    "is_connected",
    "read_graph",
    "write_graph",
]

FAMILIES = ("path", "star", "cycle", "complete", "sun", "broom")


class GraphError(ValueError):
    """Invalid graph parameters or structure."""


class GraphParseError(GraphError):
    """Malformed edge-list text.

    ``kind`` is one of ``header``, ``edge_line``, ``edge_count``,
    ``out_of_range``, ``self_loop``, ``duplicate``, ``unordered``.
    """

    def __init__(self, kind: str, message: str, line: int | None = None):
        self.kind = kind
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{kind}: {message}{where}")


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph.

    ``adjacency[v]`` is the sorted tuple of neighbors of ``v``.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Canonical edge list: pairs ``(u, v)`` with ``u < v``, sorted."""
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    def degrees(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph on ``n`` vertices, rejecting loops, repeats and bad ids."""
    if n < 1:
        raise GraphError(f"vertex count must be positive, got {n}")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has a vertex outside [0, {n})")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if v in nbrs[u]:
            raise GraphError(f"duplicate edge ({u}, {v})")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return Graph(n, tuple(tuple(sorted(s)) for s in nbrs))


def validate_graph(g: Graph) -> list[str]:
    """Return a list of invariant violations (empty when ``g`` is valid)."""
    problems = []
    if g.n != len(g.adjacency):
        problems.append(f"n={g.n} but {len(g.adjacency)} adjacency lists")
    for u, nb in enumerate(g.adjacency):
        if list(nb) != sorted(set(nb)):
            problems.append(f"neighbors of {u} not sorted/unique")
        for v in nb:
            if not 0 <= v < g.n:
                problems.append(f"neighbor {v} of {u} out of range")
            elif v == u:
                problems.append(f"self-loop at {u}")
            elif u not in g.adjacency[v]:
                problems.append(f"edge ({u}, {v}) not symmetric")
    return problems


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphError(msg)


def gen_path(n: int) -> Graph:
    """Path P_n with edges {i, i+1}."""
    _require(n >= 1, f"path needs n >= 1, got {n}")
    return from_edges(n, ((i, i + 1) for i in range(n - 1)))


def gen_star(leaves: int) -> Graph:
    """Star K_{1,leaves}; vertex 0 is the center."""
    _require(leaves >= 1, f"star needs leaves >= 1, got {leaves}")
    return from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def gen_cycle(n: int) -> Graph:
    _require(n >= 3, f"cycle needs n >= 3, got {n}")
    return from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def gen_complete(n: int) -> Graph:
    _require(n >= 1, f"complete graph needs n >= 1, got {n}")
    return from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def gen_sun(h: int) -> Graph:
    """Complete sun (trampoline) graph on 2h vertices.

    Hub vertices ``0..h-1`` form K_h; outer vertex ``h+i`` is adjacent to
    hubs ``i`` and ``(i+1) % h`` only.
    """
    _require(h >= 3, f"sun needs h >= 3, got {h}")
    edges = [(i, j) for i in range(h) for j in range(i + 1, h)]
    for i in range(h):
        edges.append((i, h + i))
        edges.append(((i + 1) % h, h + i))
    return from_edges(2 * h, edges)


def gen_broom(leaves: int, tail: int) -> Graph:
    """Broom (comet): a star with a path hanging off its center.

    Vertex 0 is the center, ``1..leaves`` are its pendant leaves and
    ``leaves+1..leaves+tail`` run along the tail; the last id is the tip.
    """
    _require(leaves >= 1 and tail >= 1, f"broom needs leaves, tail >= 1, got ({leaves}, {tail})")
    edges = [(0, i) for i in range(1, leaves + 1)]
    prev = 0
    for k in range(leaves + 1, leaves + tail + 1):
        edges.append((prev, k))
        prev = k
    return from_edges(leaves + tail + 1, edges)


def gen_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with one uniform draw per vertex pair in lexicographic order.

    The stream is numpy's PCG64 seeded with ``seed`` reduced mod 2**64, so
    a given ``(n, p, seed)`` always produces the same graph.
    """
    _require(n >= 1, f"G(n, p) needs n >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def gen_family(kind: str, **params: int) -> Graph:
    """Dispatch to a family generator by name, e.g. ``gen_family("broom", leaves=4, tail=6)``."""
    makers = {
        "path": lambda n: gen_path(n),
        "star": lambda leaves: gen_star(leaves),
        "cycle": lambda n: gen_cycle(n),
        "complete": lambda n: gen_complete(n),
        "sun": lambda h: gen_sun(h),
        "broom": lambda leaves, tail: gen_broom(leaves, tail),
    }
    if kind not in makers:
        raise GraphError(f"unknown family {kind!r}; expected one of {', '.join(FAMILIES)}")
    try:
        return makers[kind](**params)
    except TypeError as exc:
        raise GraphError(f"bad parameters for {kind}: {params}") from exc


def is_connected(g: Graph) -> bool:
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == g.n


def read_graph(text: str) -> Graph:
    """Parse the ``n m`` header + ``u v`` edge-list format (``u < v``)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphParseError("header", "empty input")
    head = lines[0].split()
    try:
        n, m = (int(tok) for tok in head)
    except ValueError:
        raise GraphParseError("header", f"expected 'n m', got {lines[0]!r}", 1) from None
    if n < 1 or m < 0:
        raise GraphParseError("header", f"need n >= 1 and m >= 0, got n={n}, m={m}", 1)
    body = lines[1:]
    if len(body) != m:
        raise GraphParseError("edge_count", f"header declares {m} edges, found {len(body)}")
    seen: set[tuple[int, int]] = set()
    edges = []
    for lineno, ln in enumerate(body, start=2):
        try:
            u, v = (int(tok) for tok in ln.split())
        except ValueError:
            raise GraphParseError("edge_line", f"expected 'u v', got {ln!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError("out_of_range", f"edge ({u}, {v}) outside [0, {n})", lineno)
        if u == v:
            raise GraphParseError("self_loop", f"self-loop at {u}", lineno)
        if u > v:
            raise GraphParseError("unordered", f"edge ({u}, {v}) must be written with u < v", lineno)
        if (u, v) in seen:
            raise GraphParseError("duplicate", f"edge ({u}, {v}) repeated", lineno)
        seen.add((u, v))
        edges.append((u, v))
    return from_edges(n, edges)


def write_graph(g: Graph) -> str:
    edges = g.edges()
    out = [f"{g.n} {len(edges)}"]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"

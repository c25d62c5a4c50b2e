"""Simple undirected graphs: representation, generators, predicates and I/O.

Vertices are the integers ``0..p-1``. Edges are stored once, as sorted pairs
``(u, v)`` with ``u < v``; dense matrices are built on demand elsewhere.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable

from .errors import CycleTooSmall, GraphSpecError, IndexOutOfRange, SelfLoop

Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph with ``p`` vertices and a canonical edge tuple.

    Build instances with :func:`from_edge_list` unless the edges are already
    canonical; the constructor only validates.
    """

    p: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.p < 0:
            raise GraphSpecError(f"vertex count must be non-negative, got {self.p}")
        prev = None
        for u, v in self.edges:
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.p):
                raise IndexOutOfRange(f"edge ({u}, {v}) not canonical for p={self.p}")
            if prev is not None and (u, v) <= prev:
                raise GraphSpecError("edges must be sorted and free of duplicates")
            prev = (u, v)

    @property
    def q(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency_list(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.p)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(n)) for n in nbrs)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency_list[v]

    def __repr__(self) -> str:
        return f"Graph(p={self.p}, q={self.q})"


def from_edge_list(p: int, pairs: Iterable[tuple[int, int]]) -> Graph:
    """Canonicalize ``pairs`` into a :class:`Graph` on ``p`` vertices.

    Pairs are oriented ``u < v``, sorted and deduplicated. Self-loops and
    indices outside ``[0, p)`` are rejected.
    """
    canon = set()
    for u, v in pairs:
        u, v = int(u), int(v)
        if not (0 <= u < p and 0 <= v < p):
            raise IndexOutOfRange(f"edge ({u}, {v}) out of range for p={p}")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        canon.add((u, v) if u < v else (v, u))
    return Graph(p, tuple(sorted(canon)))


# Generators


def complete(n: int) -> Graph:
    _require_positive(n)
    return from_edge_list(n, combinations(range(n), 2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise CycleTooSmall(f"cycle needs at least 3 vertices, got {n}")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def star(n: int) -> Graph:
    """K_{1,n-1} with center 0."""
    _require_positive(n)
    return from_edge_list(n, [(0, i) for i in range(1, n)])


def path(n: int) -> Graph:
    _require_positive(n)
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


def _require_positive(n: int) -> None:
    if n < 1:
        raise GraphSpecError(f"generator needs n >= 1, got {n}")


# Structure


def degrees(g: Graph) -> list[int]:
    deg = [0] * g.p
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def has_isolated_vertex(g: Graph) -> bool:
    return any(d == 0 for d in degrees(g))


def components(g: Graph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    seen = [False] * g.p
    comps = []
    for s in range(g.p):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    # The empty graph is treated as disconnected: nothing downstream accepts it.
    return g.p > 0 and len(components(g)) == 1


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.p
    for s in range(g.p):
        if color[s] != -1:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if color[w] == -1:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


# I/O


def parse_edge_list(text: str) -> Graph:
    """Parse the ``p q`` header + ``u v`` lines format; ``#`` starts a comment line."""
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    if not rows:
        raise GraphSpecError("edge list is empty")
    try:
        header = [int(x) for x in rows[0]]
        body = [(int(r[0]), int(r[1])) for r in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise GraphSpecError(f"malformed edge list: {exc}") from None
    if len(header) != 2:
        raise GraphSpecError("edge list header must be 'p q'")
    p, q = header
    if any(len(r) != 2 for r in rows[1:]):
        raise GraphSpecError("every edge line must hold exactly two vertices")
    if len(body) != q:
        raise GraphSpecError(f"header announces {q} edges, found {len(body)}")
    return from_edge_list(p, body)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.p} {g.q}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def graph_to_dict(g: Graph) -> dict:
    return {"p": g.p, "edges": [[u, v] for u, v in g.edges]}


def graph_from_dict(data: dict) -> Graph:
    try:
        return from_edge_list(int(data["p"]), [tuple(e) for e in data["edges"]])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GraphSpecError):
            raise
        raise GraphSpecError(f"malformed graph JSON: {exc}") from None


def to_json(g: Graph) -> str:
    return json.dumps(graph_to_dict(g), sort_keys=True)


def from_json(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphSpecError(f"invalid JSON: {exc}") from None
    return graph_from_dict(data)


def load_graph(path: str | Path) -> Graph:
    """Read a graph file; JSON is detected by a leading ``{``."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return from_json(text)
    return parse_edge_list(text)


def save_graph(g: Graph, path: str | Path) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(to_json(g) + "\n")
    else:
        path.write_text(format_edge_list(g))

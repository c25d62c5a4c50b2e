"""The six graph operations: splitting, shadow, (iterated) duplicate, H1, H2, H3.

Every construction uses a block vertex layout: block ``k`` holds vertices
``k*p .. k*p + p - 1`` and vertex ``k*p + v`` is the copy of ``v``. Block 0 is
the distinguished copy (the original graph for splitting/H2/H3, the first copy
for shadow/H1). With this layout the adjacency matrix of each result is a
Kronecker product ``S (x) A(G)`` with a small structure matrix ``S``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import GraphSpecError, InvalidCopyPair, MTooSmall
from .graph_core import Graph, from_edge_list


class Op(str, enum.Enum):
    SPLITTING = "splitting"
    SHADOW = "shadow"
    DUPLICATE_ITER = "dup"
    H1 = "h1"
    H2 = "h2"
    H3 = "h3"


# Smallest m for which each construction is defined.
MIN_M = {
    Op.SPLITTING: 1,
    Op.SHADOW: 1,
    Op.DUPLICATE_ITER: 1,
    Op.H1: 4,
    Op.H2: 2,
    Op.H3: 2,
}


@dataclass(frozen=True)
class OperationKind:
    """An operation tag with its parameter ``m`` (and the stripped copy pair for H1)."""

    tag: Op
    m: int
    pair: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "tag", Op(self.tag))
        if self.m < MIN_M[self.tag]:
            raise MTooSmall(f"{self.tag.value} needs m >= {MIN_M[self.tag]}, got {self.m}")
        if self.tag is Op.H1:
            pair = self.pair if self.pair is not None else (0, self.m - 1)
            i, j = pair
            if i == j or not (0 <= i < self.m and 0 <= j < self.m):
                raise InvalidCopyPair(f"H1 needs distinct copies in [0, {self.m}), got {pair}")
            object.__setattr__(self, "pair", (min(i, j), max(i, j)))
        elif self.pair is not None:
            raise GraphSpecError(f"{self.tag.value} takes no copy pair")

    def __str__(self):
        if self.tag is Op.H1 and self.pair != (0, self.m - 1):
            return f"h1:{self.m}:{self.pair[0]}:{self.pair[1]}"
        return f"{self.tag.value}:{self.m}"


def _copies_of(g: Graph, blocks) -> list[tuple[int, int]]:
    p = g.p
    return [(k * p + u, k * p + v) for k in blocks for u, v in g.edges]


def _cross_join(g: Graph, hub: int, blocks) -> list[tuple[int, int]]:
    # copy of v in each block joined to the hub copies of N(v)
    p = g.p
    out = []
    for k in blocks:
        for u, v in g.edges:
            out.append((k * p + u, hub * p + v))
            out.append((k * p + v, hub * p + u))
    return out


def splitting(g: Graph, m: int) -> Graph:
    """m-splitting graph: every vertex gains ``m`` copies adjacent to its neighbours."""
    OperationKind(Op.SPLITTING, m)
    return from_edge_list((m + 1) * g.p, list(g.edges) + _cross_join(g, 0, range(1, m + 1)))


def _shadow_minus(g: Graph, m: int, stripped=()) -> Graph:
    p = g.p
    edges = []
    for a in range(m):
        for b in range(m):
            if a == b and a in stripped:
                continue
            for u, v in g.edges:
                edges.append((a * p + u, b * p + v))
    return from_edge_list(m * p, edges)


def shadow(g: Graph, m: int) -> Graph:
    """m-shadow graph, adjacency ``J_m (x) A(G)``."""
    OperationKind(Op.SHADOW, m)
    return _shadow_minus(g, m)


def duplicate(g: Graph) -> Graph:
    """Duplicate graph: ``ab`` in E(G) gives edges ``ab'`` and ``a'b``; adjacency [[O, A], [A, O]]."""
    p = g.p
    edges = []
    for u, v in g.edges:
        edges.append((u, p + v))
        edges.append((p + u, v))
    return from_edge_list(2 * p, edges)


def duplicate_iter(g: Graph, m: int) -> Graph:
    OperationKind(Op.DUPLICATE_ITER, m)
    for _ in range(m):
        g = duplicate(g)
    return g


def h1(g: Graph, m: int, i: int | None = None, j: int | None = None) -> Graph:
    """Shadow graph with the internal edges of copies ``i`` and ``j`` removed (default 0 and m-1)."""
    pair = None if i is None and j is None else (i, j)
    op = OperationKind(Op.H1, m, pair)
    return _shadow_minus(g, m, stripped=op.pair)


def h2(g: Graph, m: int) -> Graph:
    """Hub copy (block 0) plus ``m-1`` satellites, each keeping its own edges and joined to the hub."""
    OperationKind(Op.H2, m)
    blocks = range(1, m)
    return from_edge_list(
        m * g.p, _copies_of(g, range(m)) + _cross_join(g, 0, blocks)
    )


def h3(g: Graph, m: int) -> Graph:
    """As :func:`h2` but with the hub's own edges removed."""
    OperationKind(Op.H3, m)
    blocks = range(1, m)
    return from_edge_list(m * g.p, _copies_of(g, blocks) + _cross_join(g, 0, blocks))


def apply(g: Graph, op: OperationKind) -> Graph:
    if op.tag is Op.SPLITTING:
        return splitting(g, op.m)
    if op.tag is Op.SHADOW:
        return shadow(g, op.m)
    if op.tag is Op.DUPLICATE_ITER:
        return duplicate_iter(g, op.m)
    if op.tag is Op.H1:
        return h1(g, op.m, *op.pair)
    if op.tag is Op.H2:
        return h2(g, op.m)
    return h3(g, op.m)


def expected_counts(p: int, q: int, op: OperationKind) -> tuple[int, int]:
    """Vertex and edge counts of ``op`` applied to a (p, q) graph.

    The splitting edge count is ``(2m+1)q``, the value forced by the
    construction's adjacency matrix.
    """
    m = op.m
    return {
        Op.SPLITTING: ((m + 1) * p, (2 * m + 1) * q),
        Op.SHADOW: (m * p, m * m * q),
        Op.DUPLICATE_ITER: (2**m * p, 2**m * q),
        Op.H1: (m * p, (m * m - 2) * q),
        Op.H2: (m * p, (3 * m - 2) * q),
        Op.H3: (m * p, 3 * (m - 1) * q),
    }[op.tag]


def printed_edge_count(q: int, op: OperationKind) -> int:
    """Edge count as stated in the source text; differs from :func:`expected_counts` only for splitting."""
    if op.tag is Op.SPLITTING:
        return (op.m + 1) * q
    return expected_counts(0, q, op)[1]

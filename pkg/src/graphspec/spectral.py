"""Graph matrices, numeric spectra and energies, and closed-form spectrum predictors.

The numeric path (``matrix`` -> Jacobi -> grouping) and the closed-form path
(``predict_spectrum``/``predict_energy``) share no code: the predictors only
see the base graph's spectrum, its order and the operation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import EmptyGraph, GraphSpecError, IsolatedVertex, MOutOfTheoremRange
from .graph_core import Graph, degrees
from .graph_ops import Op, OperationKind
from .linalg import (
    DEFAULT_GROUP_TOL,
    DEFAULT_SOLVER_TOL,
    DenseSymMatrix,
    Spectrum,
    group_multiplicities,
    multiset_products,
    sym_eigenvalues,
)


class MatrixKind(str, enum.Enum):
    ADJACENCY = "adjacency"
    RANDIC = "randic"
    NORMALIZED_LAPLACIAN = "laplacian"


@dataclass(frozen=True)
class EnergyReport:
    kind: MatrixKind
    value: float
    spectrum: Spectrum


def matrix(g: Graph, kind: MatrixKind) -> DenseSymMatrix:
    """A(G), R(G) = D^-1/2 A D^-1/2, or the normalized Laplacian I - R(G)."""
    kind = MatrixKind(kind)
    if g.p == 0:
        raise EmptyGraph("spectral operations need at least one vertex")
    a = np.zeros((g.p, g.p))
    if g.q:
        u, v = np.array(g.edges).T
        a[u, v] = 1.0
        a[v, u] = 1.0
    if kind is MatrixKind.ADJACENCY:
        return DenseSymMatrix(a)
    deg = np.array(degrees(g), dtype=np.float64)
    if np.any(deg == 0):
        raise IsolatedVertex(f"{kind.value} matrix needs a graph without isolated vertices")
    inv_sqrt = 1.0 / np.sqrt(deg)
    r = inv_sqrt[:, None] * a * inv_sqrt[None, :]
    if kind is MatrixKind.RANDIC:
        return DenseSymMatrix(r)
    return DenseSymMatrix(np.eye(g.p) - r)


@lru_cache(maxsize=1024)
def _spectrum_cached(g: Graph, kind: MatrixKind, tol: float, group_tol: float) -> Spectrum:
    return group_multiplicities(sym_eigenvalues(matrix(g, kind), tol), group_tol)


def spectrum(
    g: Graph,
    kind: MatrixKind = MatrixKind.ADJACENCY,
    tol: float = DEFAULT_SOLVER_TOL,
    group_tol: float = DEFAULT_GROUP_TOL,
) -> Spectrum:
    return _spectrum_cached(g, MatrixKind(kind), tol, group_tol)


def energy(
    g: Graph,
    kind: MatrixKind = MatrixKind.ADJACENCY,
    tol: float = DEFAULT_SOLVER_TOL,
    group_tol: float = DEFAULT_GROUP_TOL,
) -> EnergyReport:
    spec = spectrum(g, kind, tol, group_tol)
    return EnergyReport(MatrixKind(kind), spec.energy(), spec)


# Closed forms

# Smallest m at which each (operation, matrix) closed form is asserted.
THEOREM_MIN_M = {
    (Op.SPLITTING, MatrixKind.ADJACENCY): 1,
    (Op.SPLITTING, MatrixKind.RANDIC): 1,
    (Op.SHADOW, MatrixKind.ADJACENCY): 1,
    (Op.SHADOW, MatrixKind.RANDIC): 2,
    (Op.DUPLICATE_ITER, MatrixKind.ADJACENCY): 1,
    (Op.DUPLICATE_ITER, MatrixKind.RANDIC): 1,
    (Op.H1, MatrixKind.ADJACENCY): 4,
    (Op.H1, MatrixKind.RANDIC): 4,
    (Op.H2, MatrixKind.ADJACENCY): 2,
    (Op.H2, MatrixKind.RANDIC): 4,
    (Op.H3, MatrixKind.ADJACENCY): 2,
    (Op.H3, MatrixKind.RANDIC): 3,
}


def check_theorem_range(op: OperationKind, kind: MatrixKind) -> None:
    key = (op.tag, MatrixKind(kind))
    if key not in THEOREM_MIN_M:
        raise GraphSpecError(f"no closed form for the {kind.value} spectrum")
    lo = THEOREM_MIN_M[key]
    if op.m < lo:
        raise MOutOfTheoremRange(
            f"{kind.value} closed form for {op.tag.value} holds for m >= {lo}, got m={op.m}"
        )


def in_theorem_range(op: OperationKind, kind: MatrixKind) -> bool:
    try:
        check_theorem_range(op, kind)
    except MOutOfTheoremRange:
        return False
    return True


def structure_factors(op: OperationKind, kind: MatrixKind) -> list[tuple[float, int]]:
    """Eigenvalues (with multiplicity) of the small matrix S with M(op(G)) = S (x) M(G)."""
    check_theorem_range(op, kind)
    m = op.m
    adjacency = MatrixKind(kind) is MatrixKind.ADJACENCY
    if op.tag is Op.SPLITTING:
        if adjacency:
            s = math.sqrt(1 + 4 * m)
            return [((1 + s) / 2, 1), ((1 - s) / 2, 1), (0.0, m - 1)]
        return [(1.0, 1), (-m / (m + 1), 1), (0.0, m - 1)]
    if op.tag is Op.SHADOW:
        return [(float(m) if adjacency else 1.0, 1), (0.0, m - 1)]
    if op.tag is Op.DUPLICATE_ITER:
        half = 2 ** (m - 1)
        return [(1.0, half), (-1.0, half)]
    if op.tag is Op.H1:
        if adjacency:
            s = math.sqrt(m * m + 2 * m - 7)
            return [((m - 1 + s) / 2, 1), ((m - 1 - s) / 2, 1), (-1.0, 1), (0.0, m - 3)]
        return [(1.0, 1), (-1 / (m - 1), 1), (-(m - 2) / (m * (m - 1)), 1), (0.0, m - 3)]
    if op.tag is Op.H2:
        if adjacency:
            s = math.sqrt(m - 1)
            return [(1 + s, 1), (1 - s, 1), (1.0, m - 2)]
        return [(1.0, 1), (-(m - 2) / (2 * m), 1), (0.5, m - 2)]
    # H3
    if adjacency:
        s = math.sqrt(4 * m - 3)
        return [((1 + s) / 2, 1), ((1 - s) / 2, 1), (1.0, m - 2)]
    return [(1.0, 1), (-0.5, 1), (0.5, m - 2)]


def predict_spectrum(
    base: Spectrum,
    p: int,
    op: OperationKind,
    kind: MatrixKind,
    group_tol: float = DEFAULT_GROUP_TOL,
) -> Spectrum:
    """Closed-form spectrum of ``op(G)`` from the spectrum of G (adjacency or Randic)."""
    if base.order != p:
        raise GraphSpecError(f"base spectrum has {base.order} eigenvalues, expected {p}")
    factors = [(f, k) for f, k in structure_factors(op, kind) if k > 0]
    return multiset_products(factors, base.groups, group_tol)


def predict_energy(base_energy: float, p: int, op: OperationKind, kind: MatrixKind) -> float:
    """Closed-form energy of ``op(G)`` as a scalar multiple of the base energy."""
    check_theorem_range(op, kind)
    m = op.m
    e = base_energy
    if MatrixKind(kind) is MatrixKind.ADJACENCY:
        scale = {
            Op.SPLITTING: lambda: math.sqrt(1 + 4 * m),
            Op.SHADOW: lambda: m,
            Op.DUPLICATE_ITER: lambda: 2**m,
            Op.H1: lambda: 1 + math.sqrt(m * m + 2 * m - 7),
            Op.H2: lambda: m - 2 + 2 * math.sqrt(m - 1),
            Op.H3: lambda: m - 2 + math.sqrt(4 * m - 3),
        }[op.tag]()
        return scale * e
    if op.tag is Op.SPLITTING:
        return (2 * m + 1) / (m + 1) * e
    if op.tag is Op.SHADOW:
        return e
    if op.tag is Op.DUPLICATE_ITER:
        return 2**m * e
    if op.tag is Op.H1:
        return e + 2 * e / m
    if op.tag is Op.H2:
        return e + (m + 1) * (m - 2) * e / (2 * m)
    return e + (m - 1) * e / 2

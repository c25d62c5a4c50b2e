"""Dense symmetric matrices, a cyclic Jacobi eigensolver, and the Kronecker product.

The eigensolver is the oracle every closed-form spectrum is checked against,
so it is kept in-repo and small enough to audit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .errors import GraphSpecError, NoConvergence

DEFAULT_SOLVER_TOL = 1e-11
DEFAULT_GROUP_TOL = 1e-7
DEFAULT_MAX_SWEEPS = 100


class DenseSymMatrix:
    """Real symmetric matrix of order ``n`` backed by a read-only float64 array."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise GraphSpecError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise GraphSpecError("matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
        if arr.size and np.max(np.abs(arr - arr.T)) > 1e-12 * scale:
            raise GraphSpecError("matrix is not symmetric")
        arr.setflags(write=False)
        self.values = arr

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, DenseSymMatrix):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"DenseSymMatrix(n={self.n})"


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue multiset as ``(value, multiplicity)`` groups, values increasing."""

    groups: tuple[tuple[float, int], ...] = ()

    @property
    def order(self) -> int:
        return sum(k for _, k in self.groups)

    def values(self) -> np.ndarray:
        """Expanded eigenvalues in non-decreasing order."""
        return np.repeat(
            np.array([v for v, _ in self.groups], dtype=np.float64),
            [k for _, k in self.groups],
        )

    def energy(self) -> float:
        return math.fsum(k * abs(v) for v, k in self.groups)

    def is_integral(self, tol: float = 1e-6) -> bool:
        return all(abs(v - round(v)) <= tol for v, _ in self.groups)

    def max_deviation(self, other: Spectrum) -> float:
        """Largest value gap between matched groups; ``inf`` if the group structure differs."""
        if len(self.groups) != len(other.groups):
            return math.inf
        worst = 0.0
        for (a, ka), (b, kb) in zip(self.groups, other.groups):
            if ka != kb:
                return math.inf
            worst = max(worst, abs(a - b))
        return worst

    def matches(self, other: Spectrum, tol: float = DEFAULT_GROUP_TOL) -> bool:
        return self.max_deviation(other) <= tol

    def as_dict(self) -> dict[float, int]:
        return dict(self.groups)


def group_multiplicities(eigs: Iterable[float], group_tol: float = DEFAULT_GROUP_TOL) -> Spectrum:
    """Cluster sorted eigenvalues into ``(mean, multiplicity)`` groups.

    A value joins the current group when it lies within ``group_tol`` of the
    group's running mean.
    """
    if group_tol <= 0:
        raise GraphSpecError("group_tol must be positive")
    groups: list[tuple[float, int]] = []
    total = 0.0
    count = 0
    prev = -math.inf
    for x in eigs:
        x = float(x)
        if x < prev:
            raise GraphSpecError("eigenvalues must be sorted")
        prev = x
        if count and abs(x - total / count) <= group_tol:
            total += x
            count += 1
            continue
        if count:
            groups.append((total / count, count))
        total, count = x, 1
    if count:
        groups.append((total / count, count))
    return Spectrum(tuple(groups))


@njit(cache=True)
def _cyclic_jacobi(a, threshold, max_sweeps):
    # Row-cyclic sweeps over the strict upper triangle; a is overwritten.
    n = a.shape[0]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if math.sqrt(2.0 * off) <= threshold:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    return -1


def sym_eigenvalues(
    m,
    tol: float = DEFAULT_SOLVER_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi, sorted ascending.

    Sweeps stop once the off-diagonal Frobenius norm is at most
    ``tol * max(1, ||M||_F)``.

    Raises
    ------
    NoConvergence
        If the sweep budget runs out first.
    """
    if tol <= 0:
        raise GraphSpecError("solver tolerance must be positive")
    mat = m if isinstance(m, DenseSymMatrix) else DenseSymMatrix(m)
    work = np.array(mat.values, dtype=np.float64, order="C")
    if work.shape[0] == 0:
        return np.empty(0)
    # Exact symmetry keeps the rotations consistent.
    work = 0.5 * (work + work.T)
    threshold = tol * max(1.0, float(np.linalg.norm(work)))
    sweeps = _cyclic_jacobi(work, threshold, max_sweeps)
    if sweeps < 0:
        raise NoConvergence(f"cyclic Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(np.diag(work).copy())


def spectrum_of(m, tol: float = DEFAULT_SOLVER_TOL, group_tol: float = DEFAULT_GROUP_TOL) -> Spectrum:
    return group_multiplicities(sym_eigenvalues(m, tol), group_tol)


def kron(a, b) -> np.ndarray:
    """Kronecker product: ``out[i*nb + k, j*nb + l] = a[i, j] * b[k, l]``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise GraphSpecError("kron expects two matrices")
    (ra, ca), (rb, cb) = a.shape, b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(ra * rb, ca * cb)


def multiset_products(
    left: Sequence[tuple[float, int]], right: Sequence[tuple[float, int]], group_tol: float = DEFAULT_GROUP_TOL
) -> Spectrum:
    """Spectrum ``{x*y}`` of a Kronecker product from the spectra of its two factors."""
    vals: list[float] = []
    for x, kx in left:
        for y, ky in right:
            vals.extend([x * y] * (kx * ky))
    vals.sort()
    return group_multiplicities(vals, group_tol)

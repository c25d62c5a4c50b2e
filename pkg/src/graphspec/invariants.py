"""Kemeny's constant, degree Kirchhoff index, spanning-tree counts and their closed forms.

Numeric values come from the normalized-Laplacian spectrum of the graph
itself. Closed forms take only data about the base graph (order, size,
degrees, its own K/Kf*/t, and its Randic eigenvalues) and are evaluated in two
modes: ``as_printed``, literally as the formulas are usually quoted, and
``corrected``, re-derived from the Randic spectrum of the operation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import Disconnected, EmptyGraph, GraphSpecError, MOutOfTheoremRange, NoConvergence
from .graph_core import Graph, degrees, has_isolated_vertex, is_connected
from .graph_ops import Op, OperationKind, apply
from .linalg import DEFAULT_GROUP_TOL, DEFAULT_SOLVER_TOL, Spectrum
from .spectral import (
    MatrixKind,
    in_theorem_range,
    predict_energy,
    predict_spectrum,
    spectrum,
)

MATCH_ABS_TOL = 1e-7
MATCH_REL_TOL = 1e-9


class Invariant(str, enum.Enum):
    KEMENY = "kemeny"
    KIRCHHOFF = "kirchhoff"
    TREES = "trees"


class Mode(str, enum.Enum):
    AS_PRINTED = "as_printed"
    CORRECTED = "corrected"


# Numeric values


def _require_connected(g: Graph) -> None:
    if g.p < 2:
        raise EmptyGraph("invariants need at least two vertices")
    if not is_connected(g):
        raise Disconnected("graph is disconnected")


def laplacian_nonzero_eigenvalues(g: Graph, via: MatrixKind = MatrixKind.NORMALIZED_LAPLACIAN) -> np.ndarray:
    """The p-1 largest normalized-Laplacian eigenvalues of a connected graph.

    The single zero eigenvalue is dropped by position, never by tolerance.
    With ``via=RANDIC`` they are obtained as ``1 - rho`` instead.
    """
    _require_connected(g)
    via = MatrixKind(via)
    if via is MatrixKind.RANDIC:
        mu = np.sort(1.0 - spectrum(g, MatrixKind.RANDIC).values())
    elif via is MatrixKind.NORMALIZED_LAPLACIAN:
        mu = spectrum(g, MatrixKind.NORMALIZED_LAPLACIAN).values()
    else:
        raise GraphSpecError("Laplacian eigenvalues come from the Randic or normalized Laplacian matrix")
    return mu[1:]


def kemeny(g: Graph, via: MatrixKind = MatrixKind.NORMALIZED_LAPLACIAN) -> float:
    return math.fsum(1.0 / laplacian_nonzero_eigenvalues(g, via))


def degree_kirchhoff(g: Graph, via: MatrixKind = MatrixKind.NORMALIZED_LAPLACIAN) -> float:
    return 2 * g.q * kemeny(g, via)


def spanning_trees(g: Graph, via: MatrixKind = MatrixKind.NORMALIZED_LAPLACIAN) -> float:
    """prod(d) * prod(nonzero mu) / sum(d); a float, see :func:`matrix_tree_count` for the exact count."""
    mu = laplacian_nonzero_eigenvalues(g, via)
    deg = degrees(g)
    return math.prod(float(d) for d in deg) * math.prod(mu.tolist()) / sum(deg)


def matrix_tree_count(g: Graph) -> int:
    """Exact spanning-tree count: a cofactor of the combinatorial Laplacian by Bareiss elimination."""
    if g.p == 0:
        raise EmptyGraph("no vertices")
    n = g.p - 1
    if n == 0:
        return 1
    deg = degrees(g)
    lap = [[0] * n for _ in range(n)]
    for i in range(n):
        lap[i][i] = deg[i + 1]
    for u, v in g.edges:
        if u and v:
            lap[u - 1][v - 1] = -1
            lap[v - 1][u - 1] = -1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if lap[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if lap[r][k] != 0), None)
            if swap is None:
                return 0
            lap[k], lap[swap] = lap[swap], lap[k]
            sign = -sign
        pivot = lap[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                lap[i][j] = (lap[i][j] * pivot - lap[i][k] * lap[k][j]) // prev
            lap[i][k] = 0
        prev = pivot
    return sign * lap[n - 1][n - 1]


def is_integral(g: Graph, tol: float = 1e-6) -> bool:
    return spectrum(g, MatrixKind.ADJACENCY).is_integral(tol)


def is_randic_integral(g: Graph, tol: float = 1e-6) -> bool:
    return spectrum(g, MatrixKind.RANDIC).is_integral(tol)


@dataclass(frozen=True)
class EquienergeticResult:
    """Outcome of an energy comparison. Isomorphism is never tested."""

    kind: MatrixKind
    energies: tuple[float, float]
    same_order: bool
    isomorphism_checked: bool = False

    @property
    def difference(self) -> float:
        return abs(self.energies[0] - self.energies[1])

    @property
    def equienergetic(self) -> bool:
        return self.same_order and self.difference <= MATCH_ABS_TOL

    def __bool__(self):
        return self.equienergetic


def are_equienergetic(g1: Graph, g2: Graph, kind: MatrixKind = MatrixKind.ADJACENCY) -> EquienergeticResult:
    kind = MatrixKind(kind)
    e1 = spectrum(g1, kind).energy()
    e2 = spectrum(g2, kind).energy()
    return EquienergeticResult(kind, (e1, e2), g1.p == g2.p)


@dataclass(frozen=True)
class InvariantReport:
    p: int
    q: int
    energy: float
    randic_energy: float | None
    kemeny: float | None
    kirchhoff: float | None
    spanning_trees: float
    spanning_trees_rounded: int
    integral: bool
    randic_integral: bool | None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def invariant_report(g: Graph) -> InvariantReport:
    """Every invariant of ``g`` that is defined; undefined ones are ``None``.

    A disconnected graph has no spanning tree, so its count is reported as 0.
    """
    if g.p == 0:
        raise EmptyGraph("no vertices")
    adj = spectrum(g, MatrixKind.ADJACENCY)
    randic = None if has_isolated_vertex(g) else spectrum(g, MatrixKind.RANDIC)
    connected = g.p >= 2 and is_connected(g)
    if connected:
        k = kemeny(g)
        kf = 2 * g.q * k
        t = spanning_trees(g)
    else:
        k = kf = None
        t = 1.0 if g.p == 1 else 0.0
    return InvariantReport(
        p=g.p,
        q=g.q,
        energy=adj.energy(),
        randic_energy=None if randic is None else randic.energy(),
        kemeny=k,
        kirchhoff=kf,
        spanning_trees=t,
        spanning_trees_rounded=round(t),
        integral=adj.is_integral(),
        randic_integral=None if randic is None else randic.is_integral(),
    )


# Closed forms


@dataclass(frozen=True)
class BaseData:
    """Everything a closed form may use about the base graph G."""

    p: int
    q: int
    degrees: tuple[int, ...]
    kemeny: float
    kirchhoff: float
    trees: float
    randic: tuple[float, ...]  # descending, so randic[0] is the eigenvalue 1

    @classmethod
    def from_graph(cls, g: Graph) -> BaseData:
        _require_connected(g)
        rho = spectrum(g, MatrixKind.RANDIC).values()[::-1]
        return cls(
            p=g.p,
            q=g.q,
            degrees=tuple(degrees(g)),
            kemeny=kemeny(g),
            kirchhoff=degree_kirchhoff(g),
            trees=spanning_trees(g),
            randic=tuple(float(r) for r in rho),
        )


# Smallest m for which the K / Kf* / t closed forms are stated.
INVARIANT_MIN_M = {Op.SPLITTING: 1, Op.SHADOW: 1, Op.H1: 4, Op.H2: 4, Op.H3: 3}

# Closed forms whose corrected evaluation differs from the printed one.
CORRECTED_FORMS = {
    (Op.SPLITTING, Invariant.KEMENY),
    (Op.SPLITTING, Invariant.KIRCHHOFF),
    (Op.H1, Invariant.KEMENY),
    (Op.H1, Invariant.KIRCHHOFF),
    (Op.H1, Invariant.TREES),
    (Op.H2, Invariant.KEMENY),
    (Op.H2, Invariant.KIRCHHOFF),
    (Op.H2, Invariant.TREES),
    (Op.H3, Invariant.KEMENY),
    (Op.H3, Invariant.KIRCHHOFF),
    (Op.H3, Invariant.TREES),
}


def has_invariant_closed_form(op: OperationKind) -> bool:
    return op.tag in INVARIANT_MIN_M and op.m >= INVARIANT_MIN_M[op.tag]


def _check_invariant_range(op: OperationKind) -> None:
    if op.tag not in INVARIANT_MIN_M:
        raise GraphSpecError(f"no invariant closed form is stated for {op.tag.value}")
    if op.m < INVARIANT_MIN_M[op.tag]:
        raise MOutOfTheoremRange(
            f"invariant closed forms for {op.tag.value} hold for m >= {INVARIANT_MIN_M[op.tag]}, got m={op.m}"
        )


def _sum(terms, start: int) -> float:
    return math.fsum(terms[start:])


def _kemeny_closed(b: BaseData, op: OperationKind, printed: bool) -> float:
    m, p = op.m, b.p
    rho = b.randic
    lo = 1 if printed else 0  # printed sums run over i = 2..p
    if op.tag is Op.SPLITTING:
        s = _sum([(m + 1) / (1 + m * (1 + r)) for r in rho], lo)
        return p * (m - 1) + b.kemeny + s
    if op.tag is Op.SHADOW:
        return p * (m - 1) + b.kemeny
    if op.tag is Op.H1:
        s1 = _sum([(m - 1) / (m - 1 + r) for r in rho], lo)
        s2 = _sum([m * (m - 1) / (m * m - m + (m - 2) * r) for r in rho], lo)
        zeros = (m - 3) if printed else p * (m - 3)
        return zeros + b.kemeny + s1 + s2
    if op.tag is Op.H2:
        s1 = _sum([2 * m / (2 * m + (m - 2) * r) for r in rho], lo)
        s2 = _sum([2 / (2 - r) for r in rho], lo)
        if printed:
            return m - 3 + b.kemeny + s1 + s2
        return b.kemeny + s1 + (m - 2) * s2
    # H3
    s1 = _sum([2 / (2 + r) for r in rho], lo)
    s2 = _sum([2 / (2 - r) for r in rho], lo)
    if printed:
        return 6 * (m - 1) * b.q * (b.kemeny + s1 + s2)
    return b.kemeny + s1 + (m - 2) * s2


def _kirchhoff_closed(b: BaseData, op: OperationKind, printed: bool) -> float:
    m, p, q = op.m, b.p, b.q
    rho = b.randic
    if not printed:
        # Kf* = 2 |E(op(G))| K(op(G)) with the true edge count
        if op.tag is Op.SPLITTING:
            edges = (2 * m + 1) * q
        else:
            edges = {Op.SHADOW: m * m, Op.H1: m * m - 2, Op.H2: 3 * m - 2, Op.H3: 3 * (m - 1)}[op.tag] * q
        return 2 * edges * _kemeny_closed(b, op, printed=False)
    if op.tag is Op.SPLITTING:
        s = _sum([(m + 1) / (1 + m * (1 + r)) for r in rho], 1)
        return 2 * (m + 1) * q * (p * (m - 1) + s) + (m + 1) * b.kirchhoff
    if op.tag is Op.SHADOW:
        return 2 * m * m * q * (p * (m - 1)) + m * m * b.kirchhoff
    if op.tag is Op.H1:
        s1 = _sum([(m - 1) / (m - 1 + r) for r in rho], 1)
        s2 = _sum([m * (m - 1) / (m * m - m + (m - 2) * r) for r in rho], 1)
        return 2 * (m * m - 2) * q * (m - 3 + s1 + s2) + (m * m - 2) * b.kirchhoff
    if op.tag is Op.H2:
        s1 = _sum([2 * m / (2 * m + (m - 2) * r) for r in rho], 1)
        s2 = _sum([2 / (2 - r) for r in rho], 1)
        return 2 * (3 * m - 2) * q * (m - 3 + s1 + s2) + (3 * m - 2) * b.kirchhoff
    s1 = _sum([2 / (2 + r) for r in rho], 1)
    s2 = _sum([2 / (2 - r) for r in rho], 1)
    return 6 * (m - 1) * q * (s1 + s2) + 3 * (m - 1) * b.kirchhoff


def _trees_closed(b: BaseData, op: OperationKind, printed: bool) -> float:
    m, p = op.m, b.p
    rho = b.randic
    dprod = math.prod(float(d) for d in b.degrees)
    t = b.trees

    def prod(fn):
        return math.prod(fn(r) for r in rho)

    if op.tag is Op.SPLITTING:
        return (m + 1) ** p * dprod**m * t * prod(lambda r: 1 + m * r / (m + 1)) / (2 * m + 1)
    if op.tag is Op.SHADOW:
        return float(m) ** (m * p) * dprod ** (m - 1) * t / m**2
    if op.tag is Op.H1:
        lead = float(m - 1) ** (2 if printed else 2 * p)
        return (
            float(m) ** ((m - 2) * p) * lead * dprod ** (m - 1) * t
            * prod(lambda r: 1 + r / (m - 1))
            * prod(lambda r: 1 + (m - 2) * r / (m * (m - 1)))
            / (m * m - 2)
        )
    if op.tag is Op.H2:
        tail = prod(lambda r: 1 + r / 2) if printed else prod(lambda r: 1 - r / 2) ** (m - 2)
        return (
            2.0 ** ((m - 1) * p) * float(m) ** p * dprod ** (m - 1) * t
            * prod(lambda r: 1 + (m - 2) * r / (2 * m)) * tail / (3 * m - 2)
        )
    minus = prod(lambda r: 1 - r / 2)
    return (
        2.0 ** ((m - 1) * p) * float(m - 1) ** p * dprod ** (m - 1) * t
        * (minus if printed else minus ** (m - 2))
        * prod(lambda r: 1 + r / 2) / (3 * m - 3)
    )


def closed_form_invariant(
    base: BaseData | Graph,
    op: OperationKind,
    which: Invariant,
    mode: Mode = Mode.CORRECTED,
) -> float:
    """Evaluate the K, Kf* or t closed form for ``op(G)`` from base-graph data."""
    if isinstance(base, Graph):
        base = BaseData.from_graph(base)
    _check_invariant_range(op)
    printed = Mode(mode) is Mode.AS_PRINTED
    fn = {
        Invariant.KEMENY: _kemeny_closed,
        Invariant.KIRCHHOFF: _kirchhoff_closed,
        Invariant.TREES: _trees_closed,
    }[Invariant(which)]
    return fn(base, op, printed)


# Verification ledger


@dataclass(frozen=True)
class VerificationRecord:
    formula_id: str
    closed_form: float
    oracle: float
    abs_diff: float
    verdict: str
    note: str = ""

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def verdict_for(abs_diff: float, oracle: float, abs_tol: float = MATCH_ABS_TOL) -> str:
    ok = math.isfinite(abs_diff) and abs_diff <= max(abs_tol, MATCH_REL_TOL * abs(oracle))
    return "MATCH" if ok else "MISMATCH"


def _scalar_record(fid: str, closed: float, oracle: float, note: str = "", abs_tol: float = MATCH_ABS_TOL) -> VerificationRecord:
    diff = abs(closed - oracle)
    return VerificationRecord(fid, closed, oracle, diff, verdict_for(diff, oracle, abs_tol), note)


@dataclass
class Skipped:
    formula_id: str
    reason: str


@dataclass
class VerifyOptions:
    modes: tuple[Mode, ...] = (Mode.AS_PRINTED, Mode.CORRECTED)
    solver_tol: float = DEFAULT_SOLVER_TOL
    group_tol: float = DEFAULT_GROUP_TOL
    match_tol: float = MATCH_ABS_TOL
    skipped: list[Skipped] = field(default_factory=list)


def _records_for_op(g: Graph, base: BaseData, op: OperationKind, opts: VerifyOptions) -> list[VerificationRecord]:
    tag = str(op)
    records: list[VerificationRecord] = []
    built = apply(g, op)

    def guarded(fid, thunk):
        try:
            rec = thunk()
        except (GraphSpecError, NoConvergence, ZeroDivisionError, OverflowError) as exc:
            rec = VerificationRecord(fid, math.nan, math.nan, math.inf, "MISMATCH", f"error: {exc}")
        if rec is not None:
            records.append(rec)

    for kind in (MatrixKind.ADJACENCY, MatrixKind.RANDIC):
        if not in_theorem_range(op, kind):
            for what in ("spectrum", "energy"):
                opts.skipped.append(Skipped(f"{tag}/{what}/{kind.value}", "m outside the theorem's range"))
            continue

        def spec_record(kind=kind):
            fid = f"{tag}/spectrum/{kind.value}"
            base_spec = spectrum(g, kind, opts.solver_tol, opts.group_tol)
            predicted = predict_spectrum(base_spec, g.p, op, kind, opts.group_tol)
            oracle = spectrum(built, kind, opts.solver_tol, opts.group_tol)
            diff = predicted.max_deviation(oracle)
            note = f"{len(oracle.groups)} groups, order {oracle.order}"
            if not math.isfinite(diff):
                note = f"group structure differs: predicted {_fmt_groups(predicted)} vs oracle {_fmt_groups(oracle)}"
            top_p = predicted.groups[-1][0] if predicted.groups else 0.0
            top_o = oracle.groups[-1][0] if oracle.groups else 0.0
            ok = math.isfinite(diff) and diff <= opts.match_tol
            return VerificationRecord(fid, top_p, top_o, diff, "MATCH" if ok else "MISMATCH", note)

        def energy_record(kind=kind):
            fid = f"{tag}/energy/{kind.value}"
            base_e = spectrum(g, kind, opts.solver_tol, opts.group_tol).energy()
            closed = predict_energy(base_e, g.p, op, kind)
            oracle = spectrum(built, kind, opts.solver_tol, opts.group_tol).energy()
            return _scalar_record(fid, closed, oracle, abs_tol=opts.match_tol)

        guarded(f"{tag}/spectrum/{kind.value}", spec_record)
        guarded(f"{tag}/energy/{kind.value}", energy_record)

    if not has_invariant_closed_form(op):
        reason = (
            "no closed form stated" if op.tag not in INVARIANT_MIN_M
            else f"closed forms stated for m >= {INVARIANT_MIN_M[op.tag]}"
        )
        opts.skipped.append(Skipped(f"{tag}/invariants", reason))
        return records

    oracles = {
        Invariant.KEMENY: lambda: kemeny(built),
        Invariant.KIRCHHOFF: lambda: degree_kirchhoff(built),
        Invariant.TREES: lambda: spanning_trees(built),
    }
    for which in Invariant:
        for mode in opts.modes:
            fid = f"{tag}/{which.value}/{mode.value}"

            def inv_record(which=which, mode=mode, fid=fid):
                closed = closed_form_invariant(base, op, which, mode)
                oracle = oracles[which]()
                note = ""
                if (op.tag, which) in CORRECTED_FORMS:
                    note = "correction applied" if mode is Mode.CORRECTED else "differs from corrected form"
                if which is Invariant.TREES:
                    note = (note + "; " if note else "") + f"matrix-tree exact = {matrix_tree_count(built)}"
                return _scalar_record(fid, closed, oracle, note, opts.match_tol)

            guarded(fid, inv_record)
    return records


def _fmt_groups(s: Spectrum) -> str:
    return "{" + ", ".join(f"{v:.6g}^{k}" for v, k in s.groups) + "}"


def verify_all(
    g: Graph,
    ops: list[OperationKind],
    options: VerifyOptions | None = None,
) -> list[VerificationRecord]:
    """Closed form vs oracle records for every operation, in (op, formula_id) order.

    Failures inside one record become a MISMATCH record carrying the error;
    they never abort the batch. Formulas outside their stated parameter range
    produce no record and are listed in ``options.skipped``.
    """
    opts = options or VerifyOptions()
    _require_connected(g)
    if has_isolated_vertex(g):
        raise GraphSpecError("base graph has isolated vertices")
    base = BaseData.from_graph(g)
    out: list[VerificationRecord] = []
    for op in ops:
        out.extend(sorted(_records_for_op(g, base, op, opts), key=lambda r: r.formula_id))
    return out

import math
import random

import pytest
from hypothesis import given, settings

from graphspec import graph_core as gc
from graphspec.errors import Disconnected, GraphSpecError, MOutOfTheoremRange
from graphspec.graph_ops import Op, OperationKind, apply, h3, shadow, splitting
from graphspec.invariants import (
    BaseData,
    Invariant,
    Mode,
    VerifyOptions,
    are_equienergetic,
    closed_form_invariant,
    degree_kirchhoff,
    has_invariant_closed_form,
    invariant_report,
    is_integral,
    is_randic_integral,
    kemeny,
    matrix_tree_count,
    spanning_trees,
    verdict_for,
    verify_all,
)
from graphspec.spectral import MatrixKind

from conftest import CORPUS, connected_graphs, random_connected_graph

K2, C4 = gc.complete(2), gc.cycle(4)
TWO_K2 = gc.from_edge_list(4, [(0, 1), (2, 3)])
ORACLE = {Invariant.KEMENY: kemeny, Invariant.KIRCHHOFF: degree_kirchhoff, Invariant.TREES: spanning_trees}


def invariant_ops(max_m=6):
    for tag, lo in [(Op.SPLITTING, 1), (Op.SHADOW, 1), (Op.H1, 4), (Op.H2, 4), (Op.H3, 3)]:
        for m in range(lo, max_m + 1):
            yield OperationKind(tag, m)


def printed_mismatches(op):
    """Invariants whose printed closed form disagrees with the oracle (observed on the corpus)."""
    table = {
        Op.SPLITTING: {"kemeny", "kirchhoff"},
        Op.SHADOW: set(),
        Op.H1: {"kemeny", "kirchhoff", "trees"},
        Op.H2: {"kemeny", "kirchhoff", "trees"},
        Op.H3: {"kemeny", "kirchhoff", "trees"},
    }
    out = set(table[op.tag])
    if op.tag is Op.H3 and op.m == 3:
        # the misplaced exponent on prod(1 - rho/2) is m - 2 = 1 here
        out.discard("trees")
    return out


def close(a, b, rel=1e-9, abs_=1e-7):
    return abs(a - b) <= max(abs_, rel * abs(b))


@pytest.mark.parametrize(
    "g, k, kf, t",
    [
        (K2, 0.5, 1.0, 1),
        (C4, 2.5, 20.0, 4),
        (gc.complete(3), 4 / 3, 8.0, 3),
        (gc.path(4), 19 / 6, 19.0, 1),
        (gc.complete(4), 9 / 4, 27.0, 16),
    ],
)
def test_invariant_examples(g, k, kf, t):
    assert kemeny(g) == pytest.approx(k, abs=1e-12)
    assert degree_kirchhoff(g) == pytest.approx(kf, abs=1e-10)
    assert spanning_trees(g) == pytest.approx(t, abs=1e-9)
    assert matrix_tree_count(g) == t


def test_disconnected_rejected():
    for fn in (kemeny, degree_kirchhoff, spanning_trees):
        with pytest.raises(Disconnected):
            fn(TWO_K2)
    assert matrix_tree_count(TWO_K2) == 0


def test_matrix_tree_count_examples():
    assert matrix_tree_count(gc.petersen()) == 2000
    assert matrix_tree_count(gc.complete(6)) == 6**4
    assert matrix_tree_count(gc.complete(1)) == 1
    assert matrix_tree_count(gc.path(7)) == 1


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_p=10))
def test_two_paths_agree(g):
    for fn in (kemeny, degree_kirchhoff, spanning_trees):
        a, b = fn(g), fn(g, via=MatrixKind.RANDIC)
        assert abs(a - b) <= 1e-8 * max(1.0, abs(a))


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_p=8))
def test_spanning_trees_vs_exact(g):
    assert round(spanning_trees(g)) == matrix_tree_count(g)


def test_integrality_examples():
    assert is_randic_integral(shadow(C4, 3))
    assert is_integral(h3(K2, 3))
    assert not is_integral(gc.path(4))
    assert is_integral(C4) and is_integral(gc.petersen())
    assert not is_randic_integral(gc.path(4))


def test_are_equienergetic():
    res = are_equienergetic(C4, TWO_K2)
    assert res and res.same_order and res.difference <= 1e-12
    assert not res.isomorphism_checked
    assert are_equienergetic(C4, gc.star(4), MatrixKind.RANDIC)
    assert not are_equienergetic(C4, gc.star(4))
    # equal energy but different order does not count
    res = are_equienergetic(gc.complete(3), C4)
    assert res.difference <= 1e-12 and not res.same_order and not res


def test_closed_form_anchor_values():
    op = OperationKind(Op.SHADOW, 2)
    assert closed_form_invariant(K2, op, Invariant.KEMENY) == pytest.approx(2.5)
    assert closed_form_invariant(K2, op, Invariant.KIRCHHOFF) == pytest.approx(20)
    assert closed_form_invariant(K2, op, Invariant.TREES) == pytest.approx(4)


def test_splitting_printed_kemeny_mismatch():
    op = OperationKind(Op.SPLITTING, 1)
    built = splitting(K2, 1)
    assert kemeny(built) == pytest.approx(19 / 6)
    assert degree_kirchhoff(built) == pytest.approx(19)
    assert closed_form_invariant(K2, op, Invariant.KEMENY, Mode.AS_PRINTED) == pytest.approx(2.5)
    assert closed_form_invariant(K2, op, Invariant.KIRCHHOFF, Mode.AS_PRINTED) == pytest.approx(10)
    assert closed_form_invariant(K2, op, Invariant.KEMENY) == pytest.approx(19 / 6)
    assert closed_form_invariant(K2, op, Invariant.KIRCHHOFF) == pytest.approx(19)


def test_closed_form_range_errors():
    with pytest.raises(GraphSpecError):
        closed_form_invariant(K2, OperationKind(Op.DUPLICATE_ITER, 2), Invariant.KEMENY)
    with pytest.raises(GraphSpecError):
        closed_form_invariant(K2, OperationKind(Op.H2, 3), Invariant.KEMENY)
    with pytest.raises(Disconnected):
        BaseData.from_graph(TWO_K2)
    assert not has_invariant_closed_form(OperationKind(Op.H3, 2))
    assert has_invariant_closed_form(OperationKind(Op.H3, 3))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corrected_forms_match_oracle(name):
    g = CORPUS[name]
    base = BaseData.from_graph(g)
    for op in invariant_ops():
        built = apply(g, op)
        for which in Invariant:
            closed = closed_form_invariant(base, op, which)
            oracle = ORACLE[which](built)
            assert close(closed, oracle), (name, str(op), which.value, closed, oracle)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_printed_mismatch_set_is_stable(name):
    g = CORPUS[name]
    base = BaseData.from_graph(g)
    for op in invariant_ops():
        built = apply(g, op)
        bad = {
            which.value
            for which in Invariant
            if not close(closed_form_invariant(base, op, which, Mode.AS_PRINTED), ORACLE[which](built))
        }
        assert bad == printed_mismatches(op), (name, str(op))


def test_verdict_for():
    assert verdict_for(5e-8, 1.0) == "MATCH"
    assert verdict_for(1e-6, 1.0) == "MISMATCH"
    assert verdict_for(1e-6, 1e4) == "MATCH"
    assert verdict_for(math.inf, 1.0) == "MISMATCH"
    assert verdict_for(math.nan, 1.0) == "MISMATCH"


def test_verify_all_shadow_k2():
    recs = verify_all(K2, [OperationKind(Op.SHADOW, 2)])
    assert len(recs) == 10
    assert all(r.verdict == "MATCH" for r in recs)
    ids = [r.formula_id for r in recs]
    assert ids == sorted(ids)
    assert "shadow:2/kemeny/as_printed" in ids and "shadow:2/spectrum/randic" in ids


def test_verify_all_splitting_printed():
    opts = VerifyOptions(modes=(Mode.AS_PRINTED,))
    recs = verify_all(K2, [OperationKind(Op.SPLITTING, 1)], opts)
    assert len(recs) == 7
    bad = {r.formula_id for r in recs if r.verdict == "MISMATCH"}
    assert bad == {"splitting:1/kemeny/as_printed", "splitting:1/kirchhoff/as_printed"}
    by_id = {r.formula_id: r for r in recs}
    assert by_id["splitting:1/kemeny/as_printed"].oracle == pytest.approx(19 / 6)
    assert "matrix-tree exact = 1" in by_id["splitting:1/trees/as_printed"].note


def test_verify_all_skips_out_of_range():
    opts = VerifyOptions()
    recs = verify_all(K2, [OperationKind(Op.SHADOW, 1), OperationKind(Op.DUPLICATE_ITER, 2)], opts)
    skipped = {s.formula_id for s in opts.skipped}
    assert {"shadow:1/spectrum/randic", "shadow:1/energy/randic", "dup:2/invariants"} <= skipped
    assert not any(r.formula_id.startswith("shadow:1/spectrum/randic") for r in recs)
    assert [r.formula_id.split("/")[0] for r in recs][0] == "shadow:1"


def test_verify_all_rejects_bad_base():
    with pytest.raises(Disconnected):
        verify_all(TWO_K2, [OperationKind(Op.SHADOW, 2)])


def test_verify_all_is_deterministic():
    ops = [OperationKind(Op.H1, 4), OperationKind(Op.H3, 3)]
    a = [r.as_dict() for r in verify_all(CORPUS["P4"], ops)]
    b = [r.as_dict() for r in verify_all(CORPUS["P4"], ops)]
    assert a == b


def test_corpus_wide_verify_has_no_unexpected_mismatch():
    for name, g in CORPUS.items():
        ops = list(invariant_ops(max_m=5)) + [OperationKind(Op.DUPLICATE_ITER, m) for m in (1, 2, 3)]
        for r in verify_all(g, ops):
            if r.formula_id.endswith("/as_printed"):
                continue
            assert r.verdict == "MATCH", (name, r)


def test_invariant_report():
    rep = invariant_report(C4)
    assert rep.p == 4 and rep.q == 4
    assert rep.energy == pytest.approx(4) and rep.randic_energy == pytest.approx(2)
    assert rep.kemeny == pytest.approx(2.5) and rep.kirchhoff == pytest.approx(20)
    assert rep.spanning_trees_rounded == 4 and rep.integral and rep.randic_integral
    rep = invariant_report(TWO_K2)
    assert rep.kemeny is None and rep.spanning_trees == 0
    rep = invariant_report(gc.from_edge_list(3, [(0, 1)]))
    assert rep.randic_energy is None and rep.randic_integral is None
    assert set(rep.as_dict()) >= {"energy", "kemeny", "spanning_trees"}


def test_item_one_residual_random():
    # Kemeny through the two eigen routes, on graphs the corpus does not cover
    rng = random.Random(7)
    for _ in range(20):
        g = random_connected_graph(rng, rng.randint(3, 12))
        assert abs(kemeny(g) - kemeny(g, via=MatrixKind.RANDIC)) <= 1e-8

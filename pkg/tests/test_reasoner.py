import dataclasses

import pytest

from synsseq import engine
from synsseq import reasoner as R
from synsseq.chart import INF, DifferentialRecord, ExtensionRecord, LambdaElement
from synsseq.errors import UnknownClassError, UnsupportedBracketError


def test_table_records_are_consistent(fixture):
    doc = fixture("tables")
    assert R.audit_document(doc) == []
    assert len(doc.chart.differentials) + len(doc.chart.extensions) + len(doc.chart.brackets) >= 19


def test_class_ref_parsing():
    ref = R.parse_class_ref("l^3*{P^2d0}")
    assert ref.k == 3
    assert R.parse_class_ref("eta^2*nu").k == 0


def test_bracket_degrees():
    assert R.bracket_degree([(1, 1), (3, 1), (1, 1)]) == (6, 2)
    assert R.massey_degree([(0, 1), (1, 1), (0, 1)]) == (2, 2)
    with pytest.raises(UnsupportedBracketError):
        R.bracket_degree([(1, 1), (1, 1)])


def test_shifted_differential_is_reported(fixture):
    ch = fixture("tables").chart
    d = ch.differentials[0]
    moved = DifferentialRecord(d.page + 1, d.source, d.target, d.at)
    assert R.check_differential_record(moved, ch)


def test_extension_of_unknown_kind(fixture):
    ch = fixture("tables").chart
    bad = ExtensionRecord("zeta", LambdaElement(0, ("h0",)), LambdaElement(1, ("h1",)))
    with pytest.raises(UnknownClassError):
        R.check_extension_record(bad, ch)


def test_extension_closure_multiplies_lambda():
    e = ExtensionRecord("l", LambdaElement(0, ("a",)), LambdaElement(0, ("b",)))
    closed = R.extension_closure([e], 3)
    assert len(closed) >= 1


def test_cell_complexes_and_split(fixture):
    ch = fixture("cells").chart
    status = {cx.name: R.mod_lambda_split_check(cx, ch) for cx in ch.complexes}
    for cx in ch.complexes:
        assert R.check_cell_complex(cx, ch).ok, cx.name
    assert {n for n, s in status.items() if s.splits} == {"C", "Q", "X", "Y", "Z"}
    reasons = {(o.upper, o.lower): o.reason for o in status["D"].obstructions}
    assert len(reasons) == 2
    assert R.attachment_degree((83, 4), (20, 4)) == (62, 1)


def test_expr_algebra(fixture):
    ch = fixture("cells").chart
    a = R.Expr.parse("h2*e2 + h6*g")
    assert R.Expr.parse(str(a)) == a
    assert (a + a).is_zero
    prod = R.multiply(R.Expr.parse("h2"), R.Expr.parse("h1^2h4h6"), ch)
    assert prod.is_zero


def test_wedge_composition_is_independent_of_choice(fixture):
    ch = fixture("cells").chart
    cells = [(83, 7), (83, 4), (81, 6), (3, 1), (20, 4), (0, -2)]
    f = R.WedgeMapComponents.build([(83, 5)], cells, ch, known={(0, 1): "h0"}, prefix="a")
    g = R.WedgeMapComponents.build(cells, [(0, 0)], ch, known={(3, 0): "h2", (4, 0): "g"}, prefix="b")
    gf = R.compose_wedge_maps(f, g, ch)
    assert gf.entry(0, 0).names() >= {"a63_1", "a80_4"}
    values = {str(gf.substitute({"a63_1": "h6", "a80_4": v}, ch).entry(0, 0)) for v in ("e2", "e2+h1^2h4h6")}
    assert len(values) == 1
    assert R.Expr.parse(values.pop()) == R.Expr.parse("h2e2 + h6g")


def test_forced_candidates_for_il(fixture):
    ch = fixture("window_il").chart
    states = [engine.build_e2(ch)]
    cands = R.forced_differential_candidates(LambdaElement(5, ("il",)), states, ch)
    assert [(c.page, c.bidegree, c.sources) for c in cands] == [(5, (56, 9), (("Ph5e0",),))]


def test_truncation_activity_and_crossing(fixture):
    ch = fixture("window_93").chart
    d6 = [d for d in ch.differentials if d.page == 6]
    assert d6 and all(R.is_active(d, INF) for d in d6)
    assert not any(R.is_active(d, 5) for d in d6)
    assert len(R.crossing_differential_scan(ch, (93, 10), 9, 13, 3, INF)) == 1
    assert R.crossing_differential_scan(ch, (93, 10), 9, 13, 3, 5) == []


def test_bracket_record_checks(fixture):
    ch = fixture("window_93").chart
    assert ch.brackets
    assert R.check_bracket_record(ch.brackets[0], ch) == []
    b = ch.brackets[0]
    moved = dataclasses.replace(b, home=(b.home[0] + 1, b.home[1]))
    assert R.check_bracket_record(moved, ch)

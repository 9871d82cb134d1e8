import json

import pytest

from synsseq.chart import INF, Chart, DifferentialRecord, Generator, LambdaElement, lift_to_synthetic
from synsseq.chartio import compact_element, parse_chart, parse_compact_element, write_chart
from synsseq.errors import ChartParseError, LambdaRuleError

TOY = """format 1
kind synthetic
gen a 1 1
gen b 0 3
diff 3 a = l^2 b @(1,1,1)
"""


def test_round_trip_fixtures(fixture):
    for name in ("tables", "lowstem", "cells", "window_93", "stem82_83"):
        doc = fixture(name)
        again = parse_chart(write_chart(doc))
        assert again.chart == doc.chart.canonical()
        assert write_chart(again) == write_chart(doc)


def test_lambda_rule_error_points_at_the_exponent():
    bad = TOY.replace("l^2 b", "l^3 b")
    with pytest.raises(LambdaRuleError) as ei:
        parse_chart(bad)
    assert ei.value.line == 5
    assert ei.value.col == 12 and "r-1 = 2" in str(ei.value)
    doc = parse_chart(bad, strict=False)
    assert len(doc.violations) == 1


def test_zero_target_differential():
    doc = parse_chart(TOY + "diff 2 a = 0\n")
    zero = [d for d in doc.chart.differentials if not d.target]
    assert len(zero) == 1 and zero[0].page == 2
    assert "diff 2 a = 0" in write_chart(doc)


def test_unknown_generator_and_bad_syntax():
    with pytest.raises(ChartParseError) as ei:
        parse_chart(TOY + "gen c x 1\n")
    assert ei.value.line == 6


def test_compact_elements():
    e = parse_compact_element("l^3*h0+h1")
    assert e == LambdaElement(3, ("h0", "h1"))
    assert parse_compact_element(compact_element(e)) == e
    assert parse_compact_element("0").is_zero


def test_json_mirror_is_valid(fixture):
    from synsseq.chartio import chart_to_json

    data = json.loads(chart_to_json(fixture("tables")))
    assert data and isinstance(data, dict)


def test_lift_sets_lambda_powers():
    classical = Chart(generators=(Generator("a", 1, 1), Generator("b", 0, 4)),
                      differentials=(DifferentialRecord(3, ("a",), ("b",)),), synthetic=False)
    syn = lift_to_synthetic(classical)
    assert syn.synthetic
    d = syn.differentials[0]
    assert d.synthetic_target == LambdaElement(2, ("b",))
    assert syn.truncation is INF

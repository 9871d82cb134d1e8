import random

import pytest

from synsseq import engine
from synsseq.chart import INF, Chart, DifferentialRecord, Generator, Window
from synsseq.errors import ConsistencyError, InhomogeneousError, StaleDifferentialError, WindowError


def toy(*diffs, extra=()):
    gens = (Generator("a", 1, 1), Generator("b", 0, 3), Generator("c", 1, 2), Generator("e", 0, 4)) + tuple(extra)
    return Chart(generators=gens, differentials=tuple(diffs), windows=(Window(-1, 3, 0, 6),))


def summands(state, bd):
    return sorted((b, o) for _, b, o in state.module(*bd).summands())


def test_d2_kills_to_lambda_torsion():
    st = engine.run_to_infinity(toy(DifferentialRecord(2, ("a",), ("b",))))
    assert st.final
    assert summands(st, (0, 3)) == [(0, 1)]
    assert summands(st, (1, 1)) == []
    assert len(st.census) == 1 and st.census[0].order == 1


def test_longer_differential_gives_longer_torsion():
    st = engine.run_to_infinity(toy(DifferentialRecord(3, ("a",), ("e",))))
    assert summands(st, (0, 4)) == [(0, 2)]
    assert summands(st, (1, 1)) == []


def test_truncation_one_is_e2():
    ch = toy(DifferentialRecord(2, ("a",), ("b",)))
    e2 = engine.build_e2(ch, truncation=1)
    einf = engine.run_to_infinity(ch, truncation=1)
    for m in e2.modules:
        assert einf.module(*m.bidegree).summands() == m.summands()


def test_truncated_classes_reach_ceiling():
    st = engine.run_to_infinity(toy(DifferentialRecord(3, ("a",), ("e",))), truncation=2)
    # l^2 e is already zero mod l^2, so e survives as a ceiling summand
    assert summands(st, (0, 4)) == [(0, None)]


def test_stale_target_detected():
    # d2(a) = b, then d3 from a new class at (1,0) would hit the dead b
    ch = toy(DifferentialRecord(2, ("a",), ("b",)), DifferentialRecord(3, ("z",), ("b",)),
             extra=(Generator("z", 1, 0),))
    with pytest.raises((StaleDifferentialError, ConsistencyError)):
        engine.run_to_infinity(ch)


def test_stale_source_detected_and_skippable():
    ch = toy(DifferentialRecord(2, ("a",), ("b",)), DifferentialRecord(3, ("a",), ("e",)))
    with pytest.raises((StaleDifferentialError, ConsistencyError)):
        engine.run_to_infinity(ch)
    st = engine.run_to_infinity(ch, skip_stale=True)
    assert summands(st, (0, 4)) == [(0, None)]


def test_wrong_bidegree_target_rejected():
    with pytest.raises(InhomogeneousError):
        engine.run_to_infinity(toy(DifferentialRecord(2, ("a",), ("e",))))


def test_census_and_classical_agree_on_lowstem(fixture):
    ch = fixture("lowstem").chart
    st = engine.run_to_infinity(ch)
    engine.check_census(st, st.census)
    assert engine.classical_specialization(st) == engine.classical_ranks(ch)


def test_window_safety(fixture):
    st = engine.run_to_infinity(fixture("lowstem").chart)
    assert not st.column_safe(0)
    assert st.column_safe(5)
    with pytest.raises(WindowError):
        st.require_column(0)


def test_record_order_does_not_matter(fixture):
    ch = fixture("lowstem").chart
    diffs = list(ch.differentials)
    random.Random(3).shuffle(diffs)
    a = engine.run_to_infinity(ch)
    b = engine.run_to_infinity(ch.with_records(differentials=tuple(diffs)))
    assert [m.summands() for m in a.modules] == [m.summands() for m in b.modules]


def test_state_is_stepwise(fixture):
    ch = fixture("lowstem").chart
    st = engine.build_e2(ch)
    assert st.page == 2 and not st.final
    st = engine.apply_page(st, [d for d in ch.differentials if d.page == 2])
    assert st.page == 3
    assert st.truncation is INF

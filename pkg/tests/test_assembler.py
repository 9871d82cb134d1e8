import pytest

from synsseq import assembler as A
from synsseq import engine
from synsseq.chart import lift_to_synthetic
from synsseq.errors import DegreeError, PartitionError, WindowError

EXPECTED_LOW = ["Z", "Z/2", "Z/2", "Z/8", "0", "0", "Z/2", "Z/16", "(Z/2)^2", "(Z/2)^3",
                "Z/2", "Z/8", "0", "0", "(Z/2)^2", "Z/2 + Z/32"]


@pytest.fixture(scope="module")
def low(fixture):
    ch = lift_to_synthetic(fixture("lowstem").chart)
    return ch, engine.run_to_infinity(ch)


def test_low_stems(low):
    ch, e = low
    got = [str(A.classical_group(e, ch, n, allow_unsafe=True)) for n in range(16)]
    assert got == EXPECTED_LOW


def test_stem_zero_needs_opt_in(low):
    ch, e = low
    with pytest.raises(WindowError):
        A.classical_group(e, ch, 0)
    with pytest.raises(WindowError):
        A.assemble_column(e, 0, 0)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_bockstein_sequence(low, k):
    ch, e = low
    rep = A.bockstein_les_check(e, engine.run_to_infinity(ch, truncation=k), k)
    assert rep.checked > 0 and rep.ok, rep.failures


def test_column_layers(low):
    ch, e = low
    col = A.assemble_column(e, 3, 1)
    assert [x.rep for x in col.entries] == [("h2",), ("h0h2",), ("h0^2h2",)]
    assert [x.lambda_power for x in col.entries] == [0, 1, 2]
    # h0^2 h4 at (15,4) is hit by d3, so its column carries a lambda^2-torsion layer
    col = A.assemble_column(e, 14, 3)
    assert all(x.order in (None, 1, 2) for x in col.entries)


@pytest.mark.parametrize("name,stems", [("stem82_83", {82: "(Z/2)^6 + Z/8", 83: "(Z/2)^3 + (Z/8)^2"}),
                                        ("stem70_71", {70: "(Z/2)^6 + Z/4", 71: "(Z/2)^5 + Z/4 + Z/8"})])
def test_high_stems(fixture, name, stems):
    ch = fixture(name).chart
    e = engine.run_to_infinity(ch)
    for s, want in stems.items():
        assert str(A.classical_group(e, ch, s, allow_unsafe=True)) == want


def test_resolution_rejects_bad_chains():
    a, b, c = A.ChainNode(("a",), 5, 1), A.ChainNode(("b",), 5, 2), A.ChainNode(("c",), 6, 3)
    assert str(A.resolve_classical_group([a, b], [A.TwoExtensionChain((a, b))])) == "Z/4"
    with pytest.raises(PartitionError):
        A.resolve_classical_group([a, b], [A.TwoExtensionChain((a, b)), A.TwoExtensionChain((b,))])
    with pytest.raises(DegreeError):
        A.resolve_classical_group([a, c], [A.TwoExtensionChain((a, c))])
    with pytest.raises(PartitionError):
        A.resolve_classical_group([a], [A.TwoExtensionChain((a, b))])


def test_lambda_extension_merges_summands(low):
    from synsseq.chart import ExtensionRecord, LambdaElement

    ch, e = low
    plain = A.assemble_column(e, 14, 2)
    ext = ExtensionRecord("l", LambdaElement(0, ("h0h3^2",)), LambdaElement(0, ("d0",)))
    merged = A.assemble_column(e, 14, 2, [ext])
    assert plain.dim == merged.dim
    assert len({x.summand for x in merged.entries}) <= len({x.summand for x in plain.entries})

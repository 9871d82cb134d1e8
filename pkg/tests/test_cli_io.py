import shutil

import pytest

from synsseq import engine
from synsseq.chart import Window
from synsseq.cli import main
from synsseq.errors import ChartParseError, WindowError
from synsseq.pagesio import read_pages, write_pages
from synsseq.svg import RenderOptions, render_svg


@pytest.fixture(scope="module")
def pages(tmp_path_factory):
    out = tmp_path_factory.mktemp("run") / "PAGES.out"
    assert main(["run", "lowstem", "-o", str(out)]) == 0
    return out


def test_pages_round_trip(pages):
    text = pages.read_text()
    st = read_pages(text)
    assert st.final and st.chart is not None
    assert write_pages(st) == text


def test_pages_rejects_garbage():
    with pytest.raises(ChartParseError):
        read_pages("pages 1\nbogus 3\n")
    with pytest.raises(ChartParseError):
        read_pages("pages 9\n")


def test_groups_command(pages, capsys):
    assert main(["groups", str(pages), "--stem", "7"]) == 0
    assert "pi_7 = Z/16" in capsys.readouterr().out
    assert main(["groups", str(pages), "--stem", "0"]) == 2
    assert main(["groups", str(pages), "--stem", "0", "--allow-unsafe"]) == 0


def test_render_is_deterministic(pages, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["render", str(pages), "-o", str(a)]) == 0
    assert main(["render", str(pages), "-o", str(b)]) == 0
    assert a.read_text() == b.read_text()
    assert a.read_text().startswith("<?xml")
    assert main(["render", str(pages), "--window", "0..40,0..8"]) == 2


def test_svg_marks_torsion(fixture):
    st = engine.run_to_infinity(fixture("window_93").chart)
    svg = render_svg(st, options=RenderOptions(labels=True))
    assert 'data-order="5"' in svg and "λ^5" in svg
    with pytest.raises(WindowError):
        render_svg(st, Window(0, 200, 0, 3))


def test_check_exit_codes(tmp_path, capsys):
    assert main(["check", "tables", "--tables"]) == 0
    bad = tmp_path / "bad.chart"
    bad.write_text("format 1\nkind synthetic\ngen a 1 1\ngen b 0 3\ndiff 2 a = l^2 b\n")
    assert main(["check", str(bad)]) == 1
    assert "lambda" in capsys.readouterr().out
    assert main(["lift", str(bad)]) == 2
    assert main(["check", str(tmp_path / "missing.chart")]) == 2
    assert main(["nonsense"]) == 2


def test_cells_report(capsys):
    assert main(["check", "cells", "--cells"]) == 0
    out = capsys.readouterr().out
    assert "complex D" in out and "obstructed" in out


def test_fixture_dir_override(tmp_path, monkeypatch, capsys):
    from synsseq.cli import fixture_dir

    shutil.copy(fixture_dir() / "tables.chart", tmp_path / "mine.chart")
    monkeypatch.setenv("SYNSSEQ_FIXTURES", str(tmp_path))
    assert main(["fixtures"]) == 0
    assert capsys.readouterr().out.split() == ["mine"]
    assert main(["json", "mine"]) == 0


def test_lift_and_truncated_run(tmp_path, capsys):
    out = tmp_path / "p.out"
    assert main(["run", "lowstem", "--truncate", "2", "--window", "0..15,0..8", "-o", str(out)]) == 0
    assert read_pages(out.read_text()).truncation == 2
    assert main(["run", "lowstem", "--truncate", "0"]) == 2
    assert main(["lift", "lowstem"]) == 0
    assert "kind synthetic" in capsys.readouterr().out

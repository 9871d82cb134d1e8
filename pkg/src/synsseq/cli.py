"""Command-line interface.

Exit codes: 0 success, 1 findings (``check``), 2 usage or parse errors.
Chart arguments may name a bundled fixture (``lowstem``, ``tables.chart``,
...) instead of a path; ``SYNSSEQ_FIXTURES`` points at another fixture
directory.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import assembler, engine, reasoner
from .chart import Window, lift_to_synthetic
from .chartio import chart_to_json, parse_chart, write_chart
from .errors import SynSSError
from .pagesio import read_pages, write_pages
from .svg import RenderOptions, render_svg

log = logging.getLogger("synsseq")


def fixture_dir() -> Path:
    env = os.environ.get("SYNSSEQ_FIXTURES")
    return Path(env) if env else Path(__file__).with_name("fixtures")


def fixture_names() -> List[str]:
    return sorted(p.stem for p in fixture_dir().glob("*.chart"))


def resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    for cand in (fixture_dir() / path, fixture_dir() / f"{path}.chart"):
        if cand.exists():
            return cand
    raise FileNotFoundError(f"no such file or fixture: {path}")


def load_fixture(name: str):
    """Parsed :class:`ChartDocument` of a bundled fixture."""
    return parse_chart(resolve(name).read_text())


def _window(text: str) -> Window:
    try:
        a, b = text.split(",")
        s0, s1 = a.split("..")
        f0, f1 = b.split("..")
        return Window(int(s0), int(s1), int(f0), int(f1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like S0..S1,F0..F1, got {text!r}") from None


def _truncation(text: str):
    from .chart import INF

    if text == "inf":
        return INF
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("truncation must be a positive integer or 'inf'")
    return k


def _write(text: str, out: Optional[str]):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_lift(a) -> int:
    doc = parse_chart(resolve(a.input).read_text())
    _write(write_chart(lift_to_synthetic(doc.chart)), a.output)
    return 0


def cmd_run(a) -> int:
    chart = parse_chart(resolve(a.input).read_text()).chart
    state = engine.run_to_infinity(chart, truncation=a.truncate, window=a.window, skip_stale=a.skip_stale)
    _write(write_pages(state), a.output)
    print(f"E_inf reached after page {state.r_max}; {len(state.census)} census entries; "
          f"{len(state.unsafe_bidegrees())} unsafe bidegrees", file=sys.stderr)
    return 0


def cmd_groups(a) -> int:
    state = read_pages(Path(a.pages).read_text())
    if state.chart is None:
        raise SynSSError("pages file carries no chart")
    exts = list(parse_chart(resolve(a.ext).read_text()).chart.extensions) if a.ext else []
    res = assembler.classical_group(state, state.chart, a.stem, exts, allow_unsafe=a.allow_unsafe)
    for ch in assembler.derive_chains(state, state.chart, a.stem, exts):
        links = "".join(
            f" {'~>' if h else '->'} {'+'.join(n.rep)}" for h, n in zip(ch.hidden, ch.nodes[1:])
        )
        tail = " (unbounded)" if ch.unbounded else ""
        print(f"chain {'+'.join(ch.nodes[0].rep)}{links}{tail}")
    print(f"pi_{a.stem} = {res}")
    return 0


def cmd_check(a) -> int:
    doc = parse_chart(resolve(a.input).read_text(), strict=False)
    everything = not (a.tables or a.cells or a.brackets)
    findings = []
    if a.tables or everything:
        findings += reasoner.audit_document(doc)
    elif a.brackets:
        for b in doc.chart.brackets:
            findings += reasoner.check_bracket_record(b, doc.chart)
    if a.cells or everything:
        for cx in doc.chart.complexes:
            rep = reasoner.check_cell_complex(cx, doc.chart)
            findings += rep.findings
            split = reasoner.mod_lambda_split_check(cx, doc.chart)
            if a.cells:
                print(f"complex {cx.name}: {len(rep.edges)} edges checked, mod lambda {split.status}")
                for ob in split.obstructions:
                    print(f"  obstruction {ob.upper}->{ob.lower} {ob.reason} at {ob.bidegree}: "
                          f"{', '.join(ob.attachments) or 'none'}")
    sys.stdout.write(reasoner.format_findings(findings))
    return 1 if findings else 0


def cmd_render(a) -> int:
    state = read_pages(Path(a.pages).read_text())
    _write(render_svg(state, a.window, RenderOptions(arrows=not a.no_arrows, labels=a.labels)), a.output)
    return 0


def cmd_json(a) -> int:
    _write(chart_to_json(parse_chart(resolve(a.input).read_text())), a.output)
    return 0


def cmd_fixtures(a) -> int:
    for name in fixture_names():
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="synsseq", description="Synthetic Adams spectral sequence bookkeeping")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("lift", help="lift a classical chart to a synthetic one")
    q.add_argument("input")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_lift)

    q = sub.add_parser("run", help="compute pages up to E-infinity")
    q.add_argument("input")
    q.add_argument("--truncate", type=_truncation, default=None, metavar="K")
    q.add_argument("--window", type=_window, default=None)
    q.add_argument("--skip-stale", action="store_true", help="drop stale differentials with a warning")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_run)

    q = sub.add_parser("groups", help="resolve the classical group in a stem")
    q.add_argument("pages")
    q.add_argument("--stem", type=int, required=True)
    q.add_argument("--ext", help="chart with extra extension records")
    q.add_argument("--allow-unsafe", action="store_true")
    q.set_defaults(func=cmd_groups)

    q = sub.add_parser("check", help="validate records; exit 1 on findings")
    q.add_argument("input")
    q.add_argument("--tables", action="store_true")
    q.add_argument("--cells", action="store_true")
    q.add_argument("--brackets", action="store_true")
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("render", help="draw a pages file as SVG")
    q.add_argument("pages")
    q.add_argument("--window", type=_window, default=None)
    q.add_argument("--labels", action="store_true")
    q.add_argument("--no-arrows", action="store_true")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_render)

    q = sub.add_parser("json", help="JSON mirror of a chart")
    q.add_argument("input")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_json)

    q = sub.add_parser("fixtures", help="list bundled fixtures")
    q.set_defaults(func=cmd_fixtures)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return a.func(a)
    except (SynSSError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Acceptance criteria 1-7, one PASS/FAIL line each (run with ``-s`` to see them)."""
import random
import time
from pathlib import Path

import pytest

from synsseq import assembler as A
from synsseq import engine
from synsseq import reasoner as R
from synsseq.chart import INF, LambdaElement, lift_to_synthetic
from synsseq.chartio import parse_chart, write_chart
from synsseq.cli import fixture_dir, main
from synsseq.engine import _at
from synsseq.errors import LambdaRuleError
from synsseq.gf2 import in_span, span_basis
from synsseq.mutate import table_mutants
from synsseq.svg import render_svg

from randcharts import random_chart


RESULTS: dict = {}  # shown in the terminal summary by conftest


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[n] = line
    print(line)
    assert ok, detail


def timed(fn, warm=True):
    if warm:
        fn()
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# 1 -----------------------------------------------------------------------------

def test_criterion_1_table_validation(tmp_path, capsys):
    text = (fixture_dir() / "tables.chart").read_text()
    mutants = list(table_mutants(text))
    paths = []
    for i, (_, doc) in enumerate(mutants):
        p = tmp_path / f"m{i}.chart"
        p.write_text(doc)
        paths.append(p)
    tables = str(fixture_dir() / "tables.chart")

    def run():
        base = main(["check", tables, "--tables"])
        codes = [main(["check", str(p), "--tables"]) for p in paths]
        return base, codes

    (base, codes), dt = timed(run)
    capsys.readouterr()
    missed = [d for (d, _), c in zip(mutants, codes) if c != 1]
    ok = base == 0 and len(mutants) >= 100 and not missed and dt < 1.0
    report(1, ok, f"clean exit {base}, {len(mutants)} mutants, {len(missed)} missed, {dt:.3f}s")


# 2 -----------------------------------------------------------------------------

def test_criterion_2_lambda_rule():
    text = (fixture_dir() / "tables.chart").read_text()
    diffs = parse_chart(text).chart.differentials
    rows_ok = len(diffs) == 6 and all(d.synthetic_target.is_zero or d.synthetic_target.k == d.page - 1
                                      for d in diffs)
    exps = sorted((d.page, d.synthetic_target.k) for d in diffs if d.target)
    rejected = 0
    bad_rows = [ln for ln in text.split("\n") if ln.startswith("diff") and "l^" in ln]
    for ln in bad_rows:
        r = int(ln.split()[1])
        for k in (r - 2, r, r + 3):
            try:
                parse_chart(text.replace(ln, ln.replace(f"l^{r - 1} ", f"l^{k} ")))
            except LambdaRuleError:
                rejected += 1
    ok = rows_ok and exps == [(5, 4), (5, 4), (5, 4), (6, 5)] and rejected == 3 * len(bad_rows)
    report(2, ok, f"{len(diffs)} rows parse, exponents {exps}, {rejected}/{3 * len(bad_rows)} bad exponents rejected")


# 3 -----------------------------------------------------------------------------

def test_criterion_3_engine_invariants():
    chart = lift_to_synthetic(parse_chart((fixture_dir() / "lowstem.chart").read_text()).chart)

    def run():
        st = engine.run_to_infinity(chart)
        engine.check_census(st, st.census)
        nonzero = [d for d in chart.differentials if d.target]
        census = sorted((c.record.page, c.record.source) for c in st.census)
        bij = census == sorted((d.page, d.source) for d in nonzero) and all(
            c.order == c.record.page - 1 for c in st.census)
        ranks = engine.classical_specialization(st) == engine.classical_ranks(chart)
        e2 = engine.build_e2(chart, truncation=1)
        e1 = engine.run_to_infinity(chart, truncation=1)
        same = [m.summands() for m in e2.modules] == [m.summands() for m in e1.modules]
        return bij, ranks, same

    (bij, ranks, same), dt = timed(run)
    report(3, bij and ranks and same and dt < 1.0,
           f"census bijection {bij}, classical ranks {ranks}, k=1 E_inf=E_2 {same}, {dt:.3f}s")


# 4 -----------------------------------------------------------------------------

LOW = ["Z", "Z/2", "Z/2", "Z/8", "0", "0", "Z/2", "Z/16", "(Z/2)^2", "(Z/2)^3", "Z/2", "Z/8", "0", "0"]
HIGH = {("stem82_83", 82): "(Z/2)^6 + Z/8", ("stem82_83", 83): "(Z/2)^3 + (Z/8)^2",
        ("stem70_71", 70): "(Z/2)^6 + Z/4", ("stem70_71", 71): "(Z/2)^5 + Z/4 + Z/8"}


def test_criterion_4_groups():
    chart = lift_to_synthetic(parse_chart((fixture_dir() / "lowstem.chart").read_text()).chart)
    st = engine.run_to_infinity(chart)
    # stem 0 is never window-safe (the h0 tower is cut by the filtration bound)
    low = [str(A.classical_group(st, chart, n, allow_unsafe=(n == 0))) for n in range(14)]
    high = {}
    for (name, s) in HIGH:
        ch = parse_chart((fixture_dir() / f"{name}.chart").read_text()).chart
        high[(name, s)] = str(A.classical_group(engine.run_to_infinity(ch), ch, s, allow_unsafe=True))
    wrong = [n for n in range(14) if low[n] != LOW[n]] + [k[1] for k in HIGH if high[k] != HIGH[k]]
    report(4, not wrong, f"stems 0-13 and 70/71/82/83, mismatches {wrong}")


# 5 -----------------------------------------------------------------------------

def test_criterion_5_cell_complexes():
    chart = parse_chart((fixture_dir() / "cells.chart").read_text()).chart
    cells = [(83, 7), (83, 4), (81, 6), (3, 1), (20, 4), (0, -2)]

    def run():
        cx = {c.name: c for c in chart.complexes}
        accepted = {n for n in ("X", "Y", "Q", "Z", "C") if R.check_cell_complex(cx[n], chart).ok}
        n_att_x = len(cx["X"].attachments)
        split = {n: R.mod_lambda_split_check(cx[n], chart) for n in ("X", "Y", "Q", "C", "D")}
        splits = {n for n, s in split.items() if s.splits}
        obs = sorted(a for o in split["D"].obstructions for a in o.attachments)
        f = R.WedgeMapComponents.build([(83, 5)], cells, chart, known={(0, 1): "h0"}, prefix="a")
        g = R.WedgeMapComponents.build(cells, [(0, 0)], chart, known={(3, 0): "h2", (4, 0): "g"}, prefix="b")
        gf = R.compose_wedge_maps(f, g, chart).entry(0, 0)
        subs = {R.substitute(gf, {"a63_1": "h6", "a80_4": v}, chart) for v in ("e2", "e2+h1^2h4h6")}
        return accepted, n_att_x, splits, obs, gf, subs

    (accepted, n_att, splits, obs, gf, subs), dt = timed(run)
    ok = (accepted == {"X", "Y", "Q", "Z", "C"} and n_att == 5 and splits == {"X", "Y", "Q", "C"}
          and obs == ["h0", "h6"] and gf == R.Expr.parse("h2*a80_4 + g*a63_1")
          and subs == {R.Expr.parse("h2e2 + h6g")} and dt < 1.0)
    report(5, ok, f"accepted {sorted(accepted)}, splits {sorted(splits)}, D obstructions {obs}, "
                  f"composite {gf}, substituted {sorted(map(str, subs))}, {dt:.3f}s")


# 6 -----------------------------------------------------------------------------

def test_criterion_6_truncation_replay():
    chart = parse_chart((fixture_dir() / "window_93.chart").read_text()).chart
    d6 = [d for d in chart.differentials if d.page == 6 and d.target and d.synthetic_target.k == 5]
    active = [R.is_active(d, INF) for d in d6]
    inert = [not R.is_active(d, 5) for d in d6]
    home = chart.brackets[0].home
    scan_inf = R.crossing_differential_scan(chart, home, 9, 13, 3, INF)
    scan_5 = R.crossing_differential_scan(chart, home, 9, 13, 3, 5)
    ok = bool(d6) and all(active) and all(inert) and scan_5 == [] and len(scan_inf) >= 1
    report(6, ok, f"{len(d6)} d6 record(s) active at inf {active}, inert at 5 {inert}, "
                  f"crossings at inf {len(scan_inf)}, at 5 {len(scan_5)}")


# 7 -----------------------------------------------------------------------------

def _boundaries_are_cycles(state) -> bool:
    """B^j inside Z^j in every bidegree: the page differentials square to zero."""
    for bd, filt in (state._filt or {}).items():
        n = filt.n
        for j in sorted({b for b, _ in filt.B}):
            zs = span_basis(_at(filt.Z, j), n)
            if not all(in_span(v, zs, n) for v in _at(filt.B, j)):
                return False
    return True


def _targets_are_boundaries(state, chart) -> bool:
    names = state._builder.basis
    for d in chart.differentials:
        if not d.target or d.page > state.page - 1:
            continue
        g = chart.generator(d.target[0])
        basis = names[(g.stem, g.filt)]
        v = sum(1 << basis.index(t) for t in d.target)
        filt = state._filt[(g.stem, g.filt)]
        if not in_span(v, span_basis(_at(filt.B, d.page - 1), filt.n), filt.n):
            return False
    return True


def _summary(state):
    return [(m.bidegree, m.summands()) for m in state.modules]


def check_random_chart(seed: int) -> list:
    rng = random.Random(seed)
    chart = random_chart(rng)
    errs = []
    st = engine.build_e2(chart)
    while True:
        recs = [d for d in chart.differentials if d.page == st.page]
        if not recs and st.page > max((d.page for d in chart.differentials), default=1):
            break
        st = engine.apply_page(st, recs)
        if not _boundaries_are_cycles(st) or not _targets_are_boundaries(st, chart):
            errs.append("d o d")
            break
    full = engine.run_to_infinity(chart)
    if _summary(full) != _summary(st):
        errs.append("stepwise vs run_to_infinity")
    nonzero = sorted((d.page, d.source) for d in chart.differentials if d.target)
    if sorted((c.record.page, c.record.source) for c in full.census) != nonzero:
        errs.append("census")
    shuffled = list(chart.differentials)
    rng.shuffle(shuffled)
    perm = engine.run_to_infinity(chart.with_records(differentials=tuple(shuffled)))
    if _summary(perm) != _summary(full):
        errs.append("permutation")
    text = write_chart(chart)
    back = parse_chart(text)
    if back.chart != chart.canonical() or write_chart(back) != text:
        errs.append("round trip")
    if render_svg(full) != render_svg(perm):
        errs.append("svg")
    if engine.classical_specialization(full) != engine.classical_ranks(chart):
        errs.append("classical")
    return errs


def test_criterion_7_property_suite():
    check_random_chart(10_000)
    t = time.perf_counter()
    failures = {s: e for s in range(1000) if (e := check_random_chart(s))}
    dt = time.perf_counter() - t
    report(7, not failures and dt < 30.0,
           f"1000 random charts, {len(failures)} failing {dict(list(failures.items())[:3])}, {dt:.1f}s")


if __name__ == "__main__":
    raise SystemExit(pytest.main([str(Path(__file__)), "-s", "-q"]))

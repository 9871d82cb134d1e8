"""Text form of a computed page, as written by ``synsseq run``.

::

    pages 1
    page 4 final
    truncation inf
    window 0..15,0..8
    r_max 3
    module 14 3 h0h3^2
    summand 14 3 0 1 h0h3^2        # stem filt birth order|free rep
    census 2 h4 14 3 1             # page source target-stem target-filt order
    unsafe 0 0
    chart
    <chart document, indented by two spaces>

Summand representatives are ``+``-joined generator names.  The embedded
chart supplies products, extensions and differential arrows to later
commands.
"""
from __future__ import annotations

from typing import List

from .chart import INF, Window
from .chartio import parse_chart, write_chart
from .engine import CensusEntry, PageModule, PageState
from .errors import ChartParseError
from .lambda_algebra import ModuleDecomposition, Summand

PAGES_VERSION = 1


def write_pages(state: PageState) -> str:
    out = [f"pages {PAGES_VERSION}", f"page {state.page} {'final' if state.final else 'partial'}",
           f"truncation {state.truncation}", f"window {state.window}", f"r_max {state.r_max}"]
    for m in state.modules:
        s, f = m.bidegree
        out.append(f"module {s} {f} {' '.join(m.generators)}".rstrip())
        for rep, birth, order in m.summands():
            out.append(f"summand {s} {f} {birth} {'free' if order is None else order} {'+'.join(rep)}")
    for c in state.census:
        out.append(f"census {c.record.page} {'+'.join(c.record.source)} {c.target_bidegree[0]} "
                   f"{c.target_bidegree[1]} {c.order}")
    for s, f in state.unsafe_bidegrees():
        out.append(f"unsafe {s} {f}")
    if state.chart is not None:
        out.append("chart")
        out.extend(("  " + ln) if ln else "" for ln in write_chart(state.chart).rstrip("\n").split("\n"))
    return "\n".join(out) + "\n"


def read_pages(text: str) -> PageState:
    lines = text.split("\n")
    page, final, trunc, window, r_max = None, False, INF, None, 1
    mods: List[PageModule] = []
    current = None  # (bidegree, generators, summands)
    census_raw = []
    chart = None

    def flush():
        if current is not None:
            bd, gens, summ = current
            mods.append(PageModule(page, bd, gens, ModuleDecomposition.of(summ)))

    for i, ln in enumerate(lines, start=1):
        if not ln.strip() or ln.startswith("#"):
            continue
        tok = ln.split()
        head = tok[0]
        try:
            if head == "pages":
                if int(tok[1]) != PAGES_VERSION:
                    raise ChartParseError(f"unsupported pages version {tok[1]}", i, 7)
            elif head == "page":
                page, final = int(tok[1]), tok[2] == "final"
            elif head == "truncation":
                trunc = INF if tok[1] == "inf" else int(tok[1])
            elif head == "window":
                a, b = tok[1].split(",")
                s0, s1 = a.split("..")
                f0, f1 = b.split("..")
                window = Window(int(s0), int(s1), int(f0), int(f1))
            elif head == "r_max":
                r_max = int(tok[1])
            elif head == "module":
                flush()
                current = ((int(tok[1]), int(tok[2])), tuple(tok[3:]), [])
            elif head == "summand":
                bd, gens, summ = current
                s, f, birth = int(tok[1]), int(tok[2]), int(tok[3])
                if (s, f) != bd:
                    raise ChartParseError(f"summand at ({s},{f}) outside module {bd}", i, 1)
                order = None if tok[4] == "free" else int(tok[4])
                rep = 0
                for nm in tok[5].split("+"):
                    rep ^= 1 << gens.index(nm)
                summ.append(Summand(f - birth, order, rep))
            elif head == "census":
                census_raw.append((int(tok[1]), tuple(tok[2].split("+")), (int(tok[3]), int(tok[4])), int(tok[5])))
            elif head == "unsafe":
                pass  # recomputed from the window
            elif head == "chart":
                body = "\n".join(x[2:] if x.startswith("  ") else x for x in lines[i:])
                chart = parse_chart(body).chart
                break
            else:
                raise ChartParseError(f"unknown line type {head!r}", i, 1)
        except (IndexError, ValueError) as exc:
            raise ChartParseError(f"malformed {head} line: {exc}", i, 1) from None
    flush()
    if page is None or window is None:
        raise ChartParseError("missing page or window header", 1, 1)
    diffs = tuple(chart.differentials) if chart is not None else ()
    census = []
    for r, src, bd, order in census_raw:
        rec = next((d for d in diffs if d.page == r and d.source == src), None)
        if rec is None:
            raise ChartParseError(f"census entry d_{r}({'+'.join(src)}) has no matching record", 1, 1)
        census.append(CensusEntry(rec, bd, order))
    return PageState(page, trunc, window, tuple(mods), r_max, tuple(census), final, diffs, chart)

"""Deterministic SVG 1.1 charts of a page.

One dot per cyclic summand, placed at (stem, filtration).  Torsion summands
are hollow with a ``λ^k`` badge giving their order; classes born at
``λ^b`` carry a small ``b`` superscript.  Differentials of the current page
(or all of them on E-infinity) are drawn as arrows of slope (-1, r).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional
from xml.sax.saxutils import escape

from .chart import Window, display_name
from .engine import PageState
from .errors import WindowError


@dataclass(frozen=True)
class RenderOptions:
    cell: int = 24
    margin: int = 32
    arrows: bool = True
    labels: bool = False


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def render_svg(state: PageState, window: Optional[Window] = None, options: RenderOptions = RenderOptions()) -> str:
    w = window or state.window
    sw = state.window
    if not (sw.s_min <= w.s_min and w.s_max <= sw.s_max and sw.f_min <= w.f_min and w.f_max <= sw.f_max):
        raise WindowError(f"render window {w} is not inside the computed window {sw}")
    c, m = options.cell, options.margin
    ncols, nrows = w.s_max - w.s_min + 1, w.f_max - w.f_min + 1
    width, height = 2 * m + ncols * c, 2 * m + nrows * c

    def xy(s, f, k=0, n=1):
        off = (k - (n - 1) / 2) * min(6.0, c / (n + 1))
        return (m + (s - w.s_min) * c + c / 2 + off, height - m - (f - w.f_min) * c - c / 2)

    out: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>E_{"inf" if state.final else state.page} page</title>',
        '<g class="axes" stroke="#999" stroke-width="0.5" fill="none">',
        f'<line x1="{m}" y1="{height - m}" x2="{width - m}" y2="{height - m}"/>',
        f'<line x1="{m}" y1="{m}" x2="{m}" y2="{height - m}"/>',
        "</g>",
        '<g class="ticks" font-family="monospace" font-size="8" fill="#666">',
    ]
    for s in range(w.s_min, w.s_max + 1):
        x, _ = xy(s, w.f_min)
        out.append(f'<text x="{_fmt(x)}" y="{height - m + 12}" text-anchor="middle">{s}</text>')
    for f in range(w.f_min, w.f_max + 1):
        _, y = xy(w.s_min, f)
        out.append(f'<text x="{m - 6}" y="{_fmt(y + 3)}" text-anchor="end">{f}</text>')
    out.append("</g>")
    out.append('<g class="classes" font-family="monospace" font-size="7">')
    for mod in sorted(state.modules, key=lambda q: q.bidegree):
        s, f = mod.bidegree
        if not w.contains(s, f):
            continue
        summ = mod.summands()
        for k, (rep, birth, order) in enumerate(summ):
            x, y = xy(s, f, k, len(summ))
            name = escape("+".join(display_name(r) for r in rep))
            fill = "black" if order is None else "white"
            out.append(
                f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="2.5" fill="{fill}" stroke="black" stroke-width="0.8" '
                f'data-s="{s}" data-f="{f}" data-birth="{birth}" data-order="{"free" if order is None else order}">'
                f"<title>{name}</title></circle>"
            )
            if order is not None:
                out.append(f'<text x="{_fmt(x + 3)}" y="{_fmt(y - 3)}" class="badge">λ^{order}</text>')
            if birth:
                out.append(f'<text x="{_fmt(x - 7)}" y="{_fmt(y - 3)}" class="birth">{birth}</text>')
            if options.labels:
                out.append(f'<text x="{_fmt(x + 3)}" y="{_fmt(y + 8)}" class="label">{name}</text>')
    out.append("</g>")
    if options.arrows:
        out.append('<g class="differentials" stroke="#1f5fbf" stroke-width="0.8">')
        for rec in sorted(state.differentials, key=lambda d: (d.page, d.source)):
            if not rec.target or not (state.final or rec.page == state.page):
                continue
            if state.chart is None:
                continue
            g = state.chart.generator(rec.source[0])
            t = state.chart.generator(rec.target[0])
            if not (w.contains(g.stem, g.filt) and w.contains(t.stem, t.filt)):
                continue
            x1, y1 = xy(g.stem, g.filt)
            x2, y2 = xy(t.stem, t.filt)
            out.append(
                f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" data-page="{rec.page}"/>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

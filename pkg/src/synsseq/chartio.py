"""Line-oriented chart format.

One record per line::

    format 1
    kind synthetic                 # or classical
    truncation inf                 # or a positive integer
    window 0..15,0..8              # Ext is complete inside each window
    gen NAME STEM FILT
    prod LEFT NAME = SUM
    diff R SOURCE = l^K TARGET [@(s,f,d)]
    ext KIND SOURCE = TARGET [@(s,f,d)]
    class NAME STEM SYNDEG [detector=ELT] [rel=TEXT ...]
    bracket (A,B,C) home=(S,D) detector=ELT[|ELT] [indet=TEXT]
    cell COMPLEX IDX STEM SYNDEG
    attach COMPLEX UPPER LOWER CLASSREF

SUM is ``0`` or ``+``-joined names.  In positional slots an element is
``[l^K] SUM``; inside ``key=value`` fields it is written ``l^K*SUM``.  In a
synthetic document the parser insists that ``K = R - 1`` on every nonzero
``diff``.  Full-line ``#`` comments before the first record are kept; other
comments are dropped.

The canonical form (what :func:`write_chart` emits) sorts records within
each section, uses LF endings and no trailing whitespace, so parsing and
rewriting a canonical document is byte-identical.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .chart import (
    INF,
    BracketRecord,
    CellComplex,
    Chart,
    ClassDecl,
    DifferentialRecord,
    ExtensionRecord,
    Finding,
    Generator,
    LambdaElement,
    ProductRecord,
    TriDegree,
    Window,
    gf2_sum,
)
from .errors import ChartError, ChartParseError, LambdaRuleError

FORMAT_VERSION = 1

_NAME = re.compile(r"^[A-Za-z0-9_^'.\-~{}]+$")
_LPOW = re.compile(r"^l\^(\d+)$")
_INT = re.compile(r"^-?\d+$")
_AT = re.compile(r"^@\((-?\d+),(-?\d+),(-?\d+)\)$")
_WINDOW = re.compile(r"^(-?\d+)\.\.(-?\d+),(-?\d+)\.\.(-?\d+)$")
_HOME = re.compile(r"^\((-?\d+),(-?\d+)\)$")


@dataclass(frozen=True)
class ChartDocument:
    chart: Chart
    comments: Tuple[str, ...] = ()
    violations: Tuple[Finding, ...] = ()  # lambda-rule breaches kept by a lenient parse


class _Line:
    def __init__(self, lineno: int, text: str):
        self.lineno = lineno
        self.text = text
        self.tokens: List[Tuple[str, int]] = [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", text)]

    def err(self, msg, idx=None, cls=ChartParseError):
        col = self.tokens[idx][1] if idx is not None and idx < len(self.tokens) else len(self.text) + 1
        return cls(msg, self.lineno, col)

    def tok(self, idx, what):
        if idx >= len(self.tokens):
            raise self.err(f"missing {what}")
        return self.tokens[idx][0]

    def int_at(self, idx, what):
        t = self.tok(idx, what)
        if not _INT.match(t):
            raise self.err(f"expected integer {what}, got {t!r}", idx)
        return int(t)


def _parse_sum(line: _Line, idx: int) -> Tuple[str, ...]:
    t = line.tok(idx, "sum")
    if t == "0":
        return ()
    names = t.split("+")
    for n in names:
        if not n or not _NAME.match(n) or n == "0":
            raise line.err(f"bad name {n!r} in sum {t!r}", idx)
    return gf2_sum(names)


def _parse_positional_element(line: _Line, idx: int) -> Tuple[LambdaElement, int, Optional[int]]:
    """Returns (element, next index, explicit lambda exponent or None)."""
    t = line.tok(idx, "element")
    k = None
    m = _LPOW.match(t)
    if m:
        k = int(m.group(1))
        idx += 1
    support = _parse_sum(line, idx)
    el = LambdaElement(k or 0, support) if support else LambdaElement.zero()
    return el, idx + 1, k


def parse_compact_element(text: str) -> LambdaElement:
    """``l^K*SUM``, ``SUM`` or ``0``."""
    k = 0
    body = text
    if text.startswith("l^") and "*" in text:
        head, body = text.split("*", 1)
        m = _LPOW.match(head)
        if not m:
            raise ChartError(f"bad lambda power in {text!r}")
        k = int(m.group(1))
    elif text.startswith("l*"):
        k, body = 1, text[2:]
    if body == "0":
        return LambdaElement.zero()
    names = body.split("+")
    for n in names:
        if not n or not _NAME.match(n):
            raise ChartError(f"bad name {n!r} in element {text!r}")
    return LambdaElement(k, tuple(names))


def compact_element(e: LambdaElement) -> str:
    if e.is_zero:
        return "0"
    body = "+".join(e.support)
    return f"l^{e.k}*{body}" if e.k else body


def positional_element(e: LambdaElement) -> str:
    return str(e)


def _parse_at(line: _Line, idx: int) -> Optional[TriDegree]:
    if idx >= len(line.tokens):
        return None
    t = line.tokens[idx][0]
    m = _AT.match(t)
    if not m:
        raise line.err(f"unexpected token {t!r}", idx)
    if idx + 1 < len(line.tokens):
        raise line.err("trailing tokens", idx + 1)
    return TriDegree(*(int(g) for g in m.groups()))


def _expect(line: _Line, idx: int, lit: str):
    t = line.tok(idx, repr(lit))
    if t != lit:
        raise line.err(f"expected {lit!r}, got {t!r}", idx)


def parse_chart(text: str, strict: bool = True) -> ChartDocument:
    """Parse a chart document.

    With ``strict=False`` a breach of the lambda rule on a ``diff`` line is
    recorded in ``violations`` instead of raised; every other error still
    raises :class:`ChartParseError`.
    """
    gens: List[Generator] = []
    gen_seen: Dict[str, int] = {}
    prods, diffs, exts, classes, brackets = [], [], [], [], []
    windows: List[Window] = []
    cells: Dict[str, Dict[int, Tuple[int, int]]] = {}
    attaches: Dict[str, List[Tuple[int, int, str]]] = {}
    comments: List[str] = []
    violations: List[Finding] = []
    kind = "synthetic"
    truncation = INF
    seen_record = False

    raw_lines = text.split("\n")
    parsed: List[_Line] = []
    for lineno, raw in enumerate(raw_lines, start=1):
        raw = raw.rstrip("\r")
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if not seen_record:
                comments.append(raw.rstrip())
            continue
        seen_record = True
        parsed.append(_Line(lineno, raw))

    # headers first, so diff lines know the document kind
    for line in parsed:
        head = line.tokens[0][0]
        if head == "format":
            v = line.int_at(1, "format version")
            if v != FORMAT_VERSION:
                raise line.err(f"unsupported format version {v}", 1)
        elif head == "kind":
            kind = line.tok(1, "kind")
            if kind not in ("synthetic", "classical"):
                raise line.err(f"unknown kind {kind!r}", 1)
        elif head == "truncation":
            t = line.tok(1, "truncation")
            if t == "inf":
                truncation = INF
            elif _INT.match(t) and int(t) >= 1:
                truncation = int(t)
            else:
                raise line.err(f"truncation must be 'inf' or a positive integer, got {t!r}", 1)
        elif head == "window":
            m = _WINDOW.match(line.tok(1, "window"))
            if not m:
                raise line.err("window must look like S0..S1,F0..F1", 1)
            windows.append(Window(*(int(g) for g in m.groups())))

    synthetic = kind == "synthetic"
    for line in parsed:
        head = line.tokens[0][0]
        if head in ("format", "kind", "truncation", "window"):
            continue
        if head == "gen":
            name = line.tok(1, "generator name")
            if not _NAME.match(name) or name == "0" or _LPOW.match(name):
                raise line.err(f"bad generator name {name!r}", 1)
            if name in gen_seen:
                raise line.err(f"duplicate generator {name!r} (first on line {gen_seen[name]})", 1)
            stem, filt = line.int_at(2, "stem"), line.int_at(3, "filtration")
            if len(line.tokens) > 4:
                raise line.err("trailing tokens", 4)
            gen_seen[name] = line.lineno
            gens.append(Generator(name, stem, filt))
        elif head == "prod":
            left = line.tok(1, "multiplier")
            right = line.tok(2, "operand")
            _expect(line, 3, "=")
            result = _parse_sum(line, 4)
            if len(line.tokens) > 5:
                raise line.err("trailing tokens", 5)
            prods.append(ProductRecord(left, right, result))
        elif head == "diff":
            r = line.int_at(1, "page")
            source = _parse_sum(line, 2)
            _expect(line, 3, "=")
            target, nxt, k = _parse_positional_element(line, 4)
            at = _parse_at(line, nxt)
            rec = DifferentialRecord(r, source, target.support, at)
            problem = None
            if target.support:
                if synthetic:
                    if k is None or k != r - 1:
                        got = "no lambda power" if k is None else f"l^{k}"
                        problem = f"lambda exponent must equal r-1 = {r - 1} for d_{r} (got {got})"
                elif k not in (None, 0):
                    problem = "classical differentials carry no lambda power"
            if problem:
                err = line.err(problem, 4, LambdaRuleError)
                if strict:
                    raise err
                violations.append(Finding("ERROR", rec.record_id, str(err)))
            diffs.append(rec)
        elif head == "ext":
            knd = line.tok(1, "extension kind")
            eq = next((i for i, (t, _) in enumerate(line.tokens) if t == "="), None)
            if eq is None:
                raise line.err("expected '='")
            src, nxt, _ = _parse_positional_element(line, 2)
            if nxt != eq:
                raise line.err("malformed extension source", 2)
            tgt, nxt, _ = _parse_positional_element(line, eq + 1)
            at = _parse_at(line, nxt)
            exts.append(ExtensionRecord(knd, src, tgt, at))
        elif head == "class":
            name = line.tok(1, "class name")
            stem, syndeg = line.int_at(2, "stem"), line.int_at(3, "synthetic degree")
            detector = None
            rels = []
            for i in range(4, len(line.tokens)):
                t = line.tokens[i][0]
                if t.startswith("detector="):
                    try:
                        detector = parse_compact_element(t[len("detector="):])
                    except ChartError as e:
                        raise line.err(str(e), i) from None
                elif t.startswith("rel="):
                    rels.append(t[4:])
                else:
                    raise line.err(f"unexpected token {t!r}", i)
            classes.append(ClassDecl(name, stem, syndeg, detector, tuple(rels)))
        elif head == "bracket":
            ent = line.tok(1, "bracket entries")
            if not (ent.startswith("(") and ent.endswith(")")):
                raise line.err("bracket entries must be written (A,B,C)", 1)
            entries = tuple(ent[1:-1].split(","))
            if any(not e for e in entries):
                raise line.err("empty bracket entry", 1)
            home = None
            dets: Tuple[LambdaElement, ...] = ()
            indet = ""
            i = 2
            while i < len(line.tokens):
                t, col = line.tokens[i]
                if t.startswith("home="):
                    m = _HOME.match(t[5:])
                    if not m:
                        raise line.err("home must be (S,D)", i)
                    home = (int(m.group(1)), int(m.group(2)))
                elif t.startswith("detector="):
                    try:
                        dets = tuple(parse_compact_element(x) for x in t[len("detector="):].split("|"))
                    except ChartError as e:
                        raise line.err(str(e), i) from None
                elif t.startswith("indet="):
                    indet = line.text[col - 1 + len("indet="):].rstrip()
                    break
                else:
                    raise line.err(f"unexpected token {t!r}", i)
                i += 1
            if home is None:
                raise line.err("bracket needs home=(S,D)")
            brackets.append(BracketRecord(entries, home, dets, indet))
        elif head == "cell":
            cx = line.tok(1, "complex name")
            idx = line.int_at(2, "cell index")
            s, d = line.int_at(3, "stem"), line.int_at(4, "synthetic degree")
            slot = cells.setdefault(cx, {})
            if idx in slot:
                raise line.err(f"duplicate cell {idx} in {cx}", 2)
            slot[idx] = (s, d)
        elif head == "attach":
            cx = line.tok(1, "complex name")
            up, lo = line.int_at(2, "upper cell"), line.int_at(3, "lower cell")
            ref = line.tok(4, "class reference")
            if len(line.tokens) > 5:
                raise line.err("trailing tokens", 5)
            attaches.setdefault(cx, []).append((up, lo, ref))
        else:
            raise line.err(f"unknown record type {head!r}", 0)

    complexes = []
    for cx in sorted(set(cells) | set(attaches)):
        slot = cells.get(cx, {})
        if sorted(slot) != list(range(len(slot))):
            raise ChartParseError(f"cells of complex {cx} are not numbered 0..{len(slot) - 1}", 0, 0)
        for up, lo, _ in attaches.get(cx, []):
            if up not in slot or lo not in slot:
                raise ChartParseError(f"attachment {up}->{lo} in {cx} names a missing cell", 0, 0)
        complexes.append(CellComplex(cx, tuple(slot[i] for i in range(len(slot))), tuple(attaches.get(cx, []))))

    try:
        chart = Chart(
            generators=tuple(gens),
            products=tuple(prods),
            differentials=tuple(diffs),
            truncation=truncation,
            synthetic=synthetic,
            windows=tuple(windows),
            extensions=tuple(exts),
            classes=tuple(classes),
            brackets=tuple(brackets),
            complexes=tuple(complexes),
        )
    except ChartError as e:
        raise ChartParseError(str(e), 0, 0) from None
    return ChartDocument(chart, tuple(comments), tuple(violations))


def _at_suffix(at: Optional[TriDegree]) -> str:
    return f" @({at.s},{at.f},{at.d})" if at is not None else ""


def _sum(names) -> str:
    return "+".join(names) if names else "0"


def write_chart(doc) -> str:
    """Canonical text for a :class:`ChartDocument` or bare :class:`Chart`."""
    if isinstance(doc, Chart):
        doc = ChartDocument(doc)
    c = doc.chart
    out = list(doc.comments)
    out.append(f"format {FORMAT_VERSION}")
    out.append(f"kind {'synthetic' if c.synthetic else 'classical'}")
    out.append(f"truncation {c.truncation}")
    for w in sorted(c.windows, key=lambda w: (w.s_min, w.s_max, w.f_min, w.f_max)):
        out.append(f"window {w}")
    for g in sorted(c.generators, key=lambda g: (g.stem, g.filt, g.name)):
        out.append(f"gen {g.name} {g.stem} {g.filt}")
    for p in sorted(c.products, key=lambda p: (p.multiplier, p.operand, p.result)):
        out.append(f"prod {p.multiplier} {p.operand} = {_sum(p.result)}")
    for d in sorted(c.differentials, key=lambda d: (d.page, d.source, d.target)):
        if d.target and c.synthetic:
            rhs = f"l^{d.page - 1} {_sum(d.target)}"
        else:
            rhs = _sum(d.target)
        out.append(f"diff {d.page} {_sum(d.source)} = {rhs}{_at_suffix(d.at)}")
    for e in sorted(c.extensions, key=lambda e: (e.kind, e.source, e.target)):
        out.append(f"ext {e.kind} {e.source} = {e.target}{_at_suffix(e.at)}")
    for k in sorted(c.classes, key=lambda k: k.name):
        parts = [f"class {k.name} {k.stem} {k.syndeg}"]
        if k.detector is not None:
            parts.append(f"detector={compact_element(k.detector)}")
        parts.extend(f"rel={r}" for r in k.relations)
        out.append(" ".join(parts))
    for b in sorted(c.brackets, key=lambda b: (b.home, b.entries)):
        parts = [f"bracket ({','.join(b.entries)}) home=({b.home[0]},{b.home[1]})"]
        if b.detectors:
            parts.append("detector=" + "|".join(compact_element(x) for x in b.detectors))
        if b.indet:
            parts.append(f"indet={b.indet}")
        out.append(" ".join(parts))
    for cx in sorted(c.complexes, key=lambda x: x.name):
        for i, (s, d) in enumerate(cx.cells):
            out.append(f"cell {cx.name} {i} {s} {d}")
    for cx in sorted(c.complexes, key=lambda x: x.name):
        for up, lo, ref in sorted(cx.attachments):
            out.append(f"attach {cx.name} {up} {lo} {ref}")
    return "\n".join(out) + "\n"


def chart_to_json(doc) -> str:
    """JSON mirror of a chart; the text form stays the source of truth."""
    if isinstance(doc, Chart):
        doc = ChartDocument(doc)
    c = doc.chart

    def el(e):
        return {"k": e.k, "support": list(e.support)}

    payload = {
        "format": FORMAT_VERSION,
        "kind": "synthetic" if c.synthetic else "classical",
        "truncation": None if c.truncation is INF else c.truncation,
        "windows": [[w.s_min, w.s_max, w.f_min, w.f_max] for w in c.windows],
        "generators": [[g.name, g.stem, g.filt] for g in sorted(c.generators, key=lambda g: (g.stem, g.filt, g.name))],
        "products": [[p.multiplier, p.operand, list(p.result)] for p in sorted(c.products)],
        "differentials": [
            {"page": d.page, "source": list(d.source), "target": list(d.target),
             "at": list(d.at) if d.at else None}
            for d in sorted(c.differentials, key=lambda d: (d.page, d.source, d.target))
        ],
        "extensions": [
            {"kind": e.kind, "source": el(e.source), "target": el(e.target), "at": list(e.at) if e.at else None}
            for e in sorted(c.extensions, key=lambda e: (e.kind, e.source, e.target))
        ],
        "classes": [
            {"name": k.name, "stem": k.stem, "syndeg": k.syndeg,
             "detector": el(k.detector) if k.detector is not None else None, "relations": list(k.relations)}
            for k in sorted(c.classes, key=lambda k: k.name)
        ],
        "brackets": [
            {"entries": list(b.entries), "home": list(b.home), "detectors": [el(x) for x in b.detectors],
             "indet": b.indet}
            for b in sorted(c.brackets, key=lambda b: (b.home, b.entries))
        ],
        "complexes": [
            {"name": x.name, "cells": [list(p) for p in x.cells], "attachments": [list(a) for a in sorted(x.attachments)]}
            for x in sorted(c.complexes, key=lambda x: x.name)
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"

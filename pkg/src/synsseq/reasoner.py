"""Degree bookkeeping for differentials, extensions, brackets and cell complexes.

Every checker returns :class:`~synsseq.chart.Finding` lists rather than
raising, so a whole table can be audited in one pass.  Class references are
strings such as ``2~``, ``l^2*eta``, ``2~^2*kb2`` or ``l^3*{P^2d0}``: an
optional ``l^K*`` prefix followed by ``*``-joined factors, each a declared
class, a chart generator, ``{generator}`` (the class it detects), or one of
these raised to a power ``^N``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from . import gf2
from .assembler import assemble_column
from .chart import (
    INF,
    BracketRecord,
    CellComplex,
    Chart,
    DifferentialRecord,
    ExtensionRecord,
    Finding,
    LambdaElement,
    TriDegree,
    bidegree_of_sum,
)
from .engine import PageState, _at
from .errors import (
    ChartError,
    CompositionError,
    GradingError,
    UnknownClassError,
    UnsupportedBracketError,
)

_LPREFIX = re.compile(r"^l(?:\^(\d+))?\*(.+)$")
_POWER = re.compile(r"^(.+)\^(\d+)$")


# -- class references -----------------------------------------------------------

@dataclass(frozen=True)
class ClassRef:
    text: str
    k: int  # explicit lambda power
    factors: Tuple[Tuple[str, int], ...]  # (name, power)


def parse_class_ref(text: str) -> ClassRef:
    k = 0
    body = text
    m = _LPREFIX.match(text)
    if m:
        k = int(m.group(1)) if m.group(1) else 1
        body = m.group(2)
    factors = []
    for part in body.split("*"):
        if not part:
            raise UnknownClassError(f"empty factor in {text!r}")
        factors.append((part, 1))
    return ClassRef(text, k, tuple(factors))


def _factor_degree(name: str, chart: Chart) -> Tuple[int, int]:
    if name.startswith("{") and name.endswith("}"):
        inner = name[1:-1]
        if chart.has_generator(inner):
            g = chart.generator(inner)
            return (g.stem, g.filt)
        raise UnknownClassError(f"no generator {inner!r} for detected class {name}")
    decl = chart.class_decl(name)
    if decl is not None:
        return (decl.stem, decl.syndeg)
    if chart.has_generator(name):
        g = chart.generator(name)
        return (g.stem, g.filt)
    m = _POWER.match(name)
    if m:
        s, d = _factor_degree(m.group(1), chart)
        n = int(m.group(2))
        return (s * n, d * n)
    raise UnknownClassError(f"unknown class {name!r}")


def class_ref_degree(ref: Union[str, ClassRef], chart: Chart) -> Tuple[int, int]:
    """(stem, synthetic degree) of a class reference."""
    if isinstance(ref, str):
        ref = parse_class_ref(ref)
    s = d = 0
    for name, n in ref.factors:
        fs, fd = _factor_degree(name, chart)
        s += n * fs
        d += n * fd
    return (s, d - ref.k)


def _detector_of(name: str, chart: Chart) -> Optional[LambdaElement]:
    if name.startswith("{") and name.endswith("}"):
        return LambdaElement(0, (name[1:-1],))
    decl = chart.class_decl(name)
    if decl is not None:
        return decl.detector
    if chart.has_generator(name):
        return LambdaElement(0, (name,))
    return None


def element_degree(e: LambdaElement, chart: Chart) -> TriDegree:
    s, f = bidegree_of_sum(e.support, chart)
    return TriDegree(s, f, f - e.k)


# -- tables -------------------------------------------------------------------

def _safe_degree(e: LambdaElement, chart: Chart, rid: str, what: str, out: List[Finding]) -> Optional[TriDegree]:
    try:
        return element_degree(e, chart)
    except ChartError as exc:
        out.append(Finding("ERROR", rid, f"{what}: {exc}"))
        return None


def check_differential_record(rec: DifferentialRecord, chart: Chart) -> List[Finding]:
    """Source/target bidegrees, lambda^(r-1) and the (-1, +r, +1) displacement."""
    out: List[Finding] = []
    rid = rec.record_id
    if rec.page < 2:
        out.append(Finding("ERROR", rid, f"page {rec.page} < 2"))
    if not rec.source:
        return out + [Finding("ERROR", rid, "empty source")]
    src = _safe_degree(LambdaElement(0, rec.source), chart, rid, "source", out)
    if src is None:
        return out
    if rec.at is not None and rec.at != src:
        out.append(Finding("ERROR", rid, f"declared degree {rec.at} but source is at {src}"))
    if rec.target:
        tgt = _safe_degree(rec.synthetic_target, chart, rid, "target", out)
        if tgt is not None:
            want = TriDegree(src.s - 1, src.f + rec.page, src.d + 1)
            if tgt != want:
                out.append(Finding("ERROR", rid, f"target lambda^{rec.page - 1} at {tgt}, d_{rec.page} requires {want}"))
    return out


def _kind_data(kind: str, chart: Chart) -> Tuple[Tuple[int, int], Optional[int]]:
    decl = chart.class_decl(kind)
    if decl is None:
        raise UnknownClassError(f"extension kind {kind!r} is not a declared class")
    filt = None
    if decl.detector is not None and not decl.detector.is_zero:
        try:
            filt = bidegree_of_sum(decl.detector.support, chart)[1]
        except ChartError:
            filt = None
    return (decl.stem, decl.syndeg), filt


def check_extension_record(rec: ExtensionRecord, chart: Chart) -> List[Finding]:
    """Degree rule and hiddenness for ``kind * source = target``."""
    out: List[Finding] = []
    rid = rec.record_id
    (sa, da), det_f = _kind_data(rec.kind, chart)
    src = _safe_degree(rec.source, chart, rid, "source", out)
    if src is None:
        return out
    if rec.at is not None and rec.at != src:
        out.append(Finding("ERROR", rid, f"declared degree {rec.at} but source is at {src}"))
    if rec.target.is_zero:
        return out
    tgt = _safe_degree(rec.target, chart, rid, "target", out)
    if tgt is None:
        return out
    if (tgt.s, tgt.d) != (src.s + sa, src.d + da):
        out.append(Finding(
            "ERROR", rid,
            f"target at {tgt}, {rec.kind} from {src} lands in stem {src.s + sa}, degree {src.d + da}",
        ))
    if det_f is None:
        out.append(Finding("WARN", rid, f"kind {rec.kind} has no detector; hiddenness not checked"))
    elif tgt.f <= src.f + det_f:
        out.append(Finding("ERROR", rid, f"not hidden: target filtration {tgt.f} <= {src.f} + {det_f}"))
    return out


def extension_closure(records: Iterable[ExtensionRecord], max_exponent: int) -> List[ExtensionRecord]:
    """Add the lambda^j translates implied by lambda-linearity, up to ``max_exponent``."""
    out = set()
    for rec in records:
        j = 0
        while rec.source.k + j <= max_exponent:
            tgt = rec.target
            if not tgt.is_zero:
                tgt = tgt.times_lambda(j) if tgt.k + j <= max_exponent else LambdaElement.zero()
            at = None
            if rec.at is not None:
                at = TriDegree(rec.at.s, rec.at.f, rec.at.d - j)
            out.add(ExtensionRecord(rec.kind, rec.source.times_lambda(j), tgt, at))
            j += 1
    return sorted(out, key=lambda e: (e.kind, e.source, e.target))


def bracket_degree(entries: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """Home of a Toda bracket: (sum s + 1, sum d - 1)."""
    if len(entries) != 3:
        raise UnsupportedBracketError(f"only triple brackets are supported, got {len(entries)} entries")
    return (sum(s for s, _ in entries) + 1, sum(d for _, d in entries) - 1)


def massey_degree(entries: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """Bidegree of a Massey product of E-page elements: (sum s + 1, sum f - 1)."""
    if len(entries) != 3:
        raise UnsupportedBracketError(f"only triple Massey products are supported, got {len(entries)} entries")
    return (sum(s for s, _ in entries) + 1, sum(f for _, f in entries) - 1)


def check_bracket_record(rec: BracketRecord, chart: Chart, einf: Optional[PageState] = None) -> List[Finding]:
    out: List[Finding] = []
    rid = rec.record_id
    try:
        degs = [class_ref_degree(e, chart) for e in rec.entries]
        home = bracket_degree(degs)
    except (UnknownClassError, UnsupportedBracketError) as exc:
        return [Finding("ERROR", rid, str(exc))]
    if home != tuple(rec.home):
        out.append(Finding("ERROR", rid, f"declared home {tuple(rec.home)} but entries give {home}"))
    for det in rec.detectors:
        if det.is_zero:
            continue
        t = _safe_degree(det, chart, rid, "detector", out)
        if t is None:
            continue
        if (t.s, t.d) != tuple(rec.home):
            out.append(Finding("ERROR", rid, f"detector {det} at {t} is not in degree {tuple(rec.home)}"))
        elif einf is not None:
            reps = {c.rep for c in enumerate_detectors(einf, t.s, t.d, allow_unsafe=True)}
            if det.support not in reps:
                out.append(Finding("WARN", rid, f"detector {det} is not an E-infinity class in ({t.s},{t.d})"))
    return out


def check_class_decls(chart: Chart) -> List[Finding]:
    out: List[Finding] = []
    for c in chart.classes:
        if c.detector is None or c.detector.is_zero:
            continue
        rid = f"class:{c.name}"
        t = _safe_degree(c.detector, chart, rid, "detector", out)
        if t is not None and (t.s, t.d) != (c.stem, c.syndeg):
            out.append(Finding("ERROR", rid, f"detector {c.detector} at {t} but class is in ({c.stem},{c.syndeg})"))
    return out


def check_tables(chart: Chart, einf: Optional[PageState] = None) -> List[Finding]:
    out: List[Finding] = []
    out += check_class_decls(chart)
    for d in chart.differentials:
        out += check_differential_record(d, chart)
    for e in chart.extensions:
        try:
            out += check_extension_record(e, chart)
        except UnknownClassError as exc:
            out.append(Finding("ERROR", e.record_id, str(exc)))
    for b in chart.brackets:
        out += check_bracket_record(b, chart, einf)
    return sorted(set(out))


def format_findings(findings: Iterable[Finding]) -> str:
    return "".join(f"{f}\n" for f in sorted(set(findings)))


# -- cell complexes -------------------------------------------------------------

@dataclass(frozen=True)
class EdgeCheck:
    upper: int
    lower: int
    ref: str
    required: Tuple[int, int]
    actual: Optional[Tuple[int, int]]

    @property
    def ok(self) -> bool:
        return self.required == self.actual


@dataclass(frozen=True)
class CellReport:
    complex: str
    edges: Tuple[EdgeCheck, ...]
    findings: Tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.findings


def attachment_degree(upper: Tuple[int, int], lower: Tuple[int, int]) -> Tuple[int, int]:
    return (upper[0] - 1 - lower[0], upper[1] + 1 - lower[1])


def check_cell_complex(cx: CellComplex, chart: Chart) -> CellReport:
    rid = f"cx:{cx.name}"
    edges, findings = [], []
    for up, lo, ref in cx.attachments:
        need = attachment_degree(cx.cells[up], cx.cells[lo])
        try:
            got = class_ref_degree(ref, chart)
        except UnknownClassError as exc:
            got = None
            findings.append(Finding("ERROR", rid, f"edge {up}->{lo}: {exc}"))
        edges.append(EdgeCheck(up, lo, ref, need, got))
        if got is not None and got != need:
            findings.append(Finding("ERROR", rid, f"edge {up}->{lo} {ref} is in {got}, cells require {need}"))
        if cx.cells[up][0] <= cx.cells[lo][0]:
            findings.append(Finding("ERROR", rid, f"edge {up}->{lo} does not go down in stem"))
    # stems strictly drop along edges, so the graph is acyclic once that holds
    return CellReport(cx.name, tuple(edges), tuple(sorted(set(findings))))


@dataclass(frozen=True)
class Obstruction:
    upper: int
    lower: int
    reason: str  # "not-lambda-divisible" or "skipped-attachment"
    bidegree: Tuple[int, int]
    attachments: Tuple[str, ...]  # possible mod-lambda attaching maps


@dataclass(frozen=True)
class SplitReport:
    complex: str
    status: str  # "splits", "obstructed" or "inconclusive"
    obstructions: Tuple[Obstruction, ...] = ()
    unknown: Tuple[Tuple[int, int], ...] = ()

    @property
    def splits(self) -> bool:
        return self.status == "splits"


def _reachable(n: int, edges: Sequence[Tuple[int, int]]) -> Dict[int, set]:
    adj: Dict[int, set] = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
    reach = {}
    for i in range(n):
        seen, stack = set(), list(adj[i])
        while stack:
            j = stack.pop()
            if j not in seen:
                seen.add(j)
                stack.extend(adj[j])
        reach[i] = seen
    return reach


def mod_lambda_split_check(cx: CellComplex, chart: Chart) -> SplitReport:
    """Does the complex split after smashing with S/lambda?

    Attachments whose class carries a lambda factor vanish mod lambda; an
    attachment without one survives as its detector.  Cells joined by a path
    but no direct edge could acquire an attaching map in Ext; that bidegree
    has to be empty.
    """
    obstructions, unknown = [], []
    direct = set()
    for up, lo, ref in cx.attachments:
        direct.add((up, lo))
        r = parse_class_ref(ref)
        if r.k >= 1:
            continue
        dets = []
        for name, n in r.factors:
            det = _detector_of(name, chart)
            if det is None:
                m = _POWER.match(name)
                det = _detector_of(m.group(1), chart) if m else None
                name_txt = str(det) + f"^{m.group(2)}" if det is not None and m else "?"
            else:
                name_txt = str(det)
            dets.append(name_txt if det is not None else f"?{name}")
        obstructions.append(Obstruction(
            up, lo, "not-lambda-divisible", attachment_degree(cx.cells[up], cx.cells[lo]), ("*".join(dets),),
        ))
    reach = _reachable(len(cx.cells), [(u, l) for u, l, _ in cx.attachments])
    for up in range(len(cx.cells)):
        for lo in sorted(reach[up]):
            if (up, lo) in direct:
                continue
            s, f = attachment_degree(cx.cells[up], cx.cells[lo])
            empty = chart.is_empty_at(s, f)
            if empty is None:
                unknown.append((s, f))
            elif not empty:
                names = tuple(g.name for g in chart.generators_at(s, f))
                obstructions.append(Obstruction(up, lo, "skipped-attachment", (s, f), names))
    obstructions.sort(key=lambda o: (o.upper, o.lower, o.reason))
    if obstructions:
        status = "obstructed"
    elif unknown:
        status = "inconclusive"
    else:
        status = "splits"
    return SplitReport(cx.name, status, tuple(obstructions), tuple(sorted(set(unknown))))


# -- wedge maps -----------------------------------------------------------------

Monomial = Tuple[str, ...]


@dataclass(frozen=True)
class Expr:
    """GF(2) sum of monomials; a monomial is a sorted tuple of factor names."""

    terms: frozenset = frozenset()

    @classmethod
    def of(cls, *monomials: Iterable[str]) -> "Expr":
        out: set = set()
        for m in monomials:
            out ^= {tuple(sorted(m))}
        return cls(frozenset(out))

    @classmethod
    def parse(cls, text: str) -> "Expr":
        text = text.strip()
        if text in ("", "0"):
            return cls()
        return cls.of(*(tuple(p.strip() for p in t.split("*")) for t in text.split("+")))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Expr") -> "Expr":
        return Expr(self.terms ^ other.terms)

    def names(self) -> set:
        return {x for t in self.terms for x in t}

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join("*".join(t) for t in sorted(self.terms))


def _as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if v is None or v == 0:
        return Expr()
    return Expr.parse(str(v))


def _reduce_monomial(mono: Monomial, chart: Chart) -> Expr:
    """Multiply out known factors through the chart's product records."""
    known = [x for x in mono if chart.has_generator(x)]
    other = [x for x in mono if not chart.has_generator(x)]
    for a, b in itertools.combinations(range(len(known)), 2):
        res = chart.product(known[a], known[b])
        if res is None:
            continue
        rest = [x for i, x in enumerate(known) if i not in (a, b)] + other
        total = Expr()
        for r in res:
            total = total + _reduce_monomial(tuple(rest + [r]), chart)
        return total
    return Expr.of(mono)


def multiply(a: Expr, b: Expr, chart: Chart) -> Expr:
    out = Expr()
    for x in a.terms:
        for y in b.terms:
            out = out + _reduce_monomial(tuple(x) + tuple(y), chart)
    return out


def substitute(e: Expr, values: Mapping[str, object], chart: Chart) -> Expr:
    out = Expr()
    for mono in e.terms:
        acc = Expr.of(())
        for x in mono:
            acc = multiply(acc, _as_expr(values[x]) if x in values else Expr.of((x,)), chart)
        out = out + acc
    return out


def _unknown_name(prefix: str, s: int, f: int) -> str:
    return f"{prefix}{s}_{f}"


@dataclass(frozen=True)
class WedgeMapComponents:
    """A map between wedges of spheres, entry (i, j) from source i to target j.

    Summands are (stem, synthetic degree) pairs; an entry is an element of
    Ext in bidegree ``source[i] - target[j]`` or a symbolic unknown.
    """

    source: Tuple[Tuple[int, int], ...]
    target: Tuple[Tuple[int, int], ...]
    entries: Tuple[Tuple[Tuple[int, int], Expr], ...] = ()

    def entry(self, i: int, j: int) -> Expr:
        for key, e in self.entries:
            if key == (i, j):
                return e
        return Expr()

    def bidegree(self, i: int, j: int) -> Tuple[int, int]:
        return (self.source[i][0] - self.target[j][0], self.source[i][1] - self.target[j][1])

    @classmethod
    def build(cls, source, target, chart: Chart, known: Optional[Mapping[Tuple[int, int], object]] = None,
              prefix: Optional[str] = None) -> "WedgeMapComponents":
        """Known entries as given, forced zeros where Ext is empty, unknowns elsewhere.

        Unknowns are named ``{prefix}{s}_{f}`` after their bidegree.
        """
        source, target = tuple(map(tuple, source)), tuple(map(tuple, target))
        known = dict(known or {})
        out = []
        for i in range(len(source)):
            for j in range(len(target)):
                s, f = source[i][0] - target[j][0], source[i][1] - target[j][1]
                if (i, j) in known:
                    e = _as_expr(known[(i, j)])
                    _check_entry(e, (s, f), chart)
                elif chart.is_empty_at(s, f) is True:
                    e = Expr()
                elif prefix is not None:
                    e = Expr.of((_unknown_name(prefix, s, f),))
                else:
                    e = Expr()
                if not e.is_zero:
                    out.append(((i, j), e))
        return cls(source, target, tuple(out))

    def substitute(self, values: Mapping[str, object], chart: Chart) -> "WedgeMapComponents":
        return WedgeMapComponents(
            self.source, self.target,
            tuple((k, e2) for k, e in self.entries if not (e2 := substitute(e, values, chart)).is_zero),
        )


def _check_entry(e: Expr, bideg: Tuple[int, int], chart: Chart):
    for mono in e.terms:
        if not all(chart.has_generator(x) for x in mono):
            continue
        s = sum(chart.generator(x).stem for x in mono)
        f = sum(chart.generator(x).filt for x in mono)
        if (s, f) != bideg:
            raise GradingError(f"entry {'*'.join(mono)} is in {(s, f)}, expected {bideg}")


def identity_wedge(summands) -> WedgeMapComponents:
    summands = tuple(map(tuple, summands))
    return WedgeMapComponents(summands, summands, tuple(((i, i), Expr.of(())) for i in range(len(summands))))


def compose_wedge_maps(f: WedgeMapComponents, g: WedgeMapComponents, chart: Chart) -> WedgeMapComponents:
    """``g o f``: entry (i, k) is the sum over j of g(j, k) * f(i, j)."""
    if f.target != g.source:
        raise CompositionError(f"target wedge {f.target} of the first map is not the source {g.source} of the second")
    out = []
    for i in range(len(f.source)):
        for k in range(len(g.target)):
            acc = Expr()
            for j in range(len(f.target)):
                a, b = f.entry(i, j), g.entry(j, k)
                if a.is_zero or b.is_zero:
                    continue
                acc = acc + multiply(b, a, chart)
            if not acc.is_zero:
                out.append(((i, k), acc))
    return WedgeMapComponents(f.source, g.target, tuple(out))


# -- E-infinity queries -----------------------------------------------------------

@dataclass(frozen=True)
class Detector:
    rep: Tuple[str, ...]
    filt: int
    lambda_power: int
    order: Optional[int]


def enumerate_detectors(einf: PageState, s: int, d: int, min_filt: int = 0,
                        allow_unsafe: bool = False) -> List[Detector]:
    col = assemble_column(einf, s, d, allow_unsafe=allow_unsafe)
    return [Detector(e.rep, e.filt, e.filt - d, e.order) for e in col.entries if e.filt >= min_filt]


@dataclass(frozen=True)
class Candidate:
    page: int
    bidegree: Tuple[int, int]
    sources: Tuple[Tuple[str, ...], ...]  # basis of the surviving source subspace


def _quotient_reps(state: PageState, bd: Tuple[int, int], j: int) -> List[int]:
    filt = state._filt.get(bd) if state._filt else None
    b = state._builder
    n = len(b.basis.get(bd, ()))
    if n == 0:
        return []
    if filt is None:
        zs, bs = [1 << i for i in range(n)], []
    else:
        zs, bs = _at(filt.Z, j), _at(filt.B, j)
    reps, span = [], list(gf2.span_basis(bs, n))
    for z in zs:
        if not gf2.in_span(z, span, n):
            reps.append(z)
            span.append(z)
    return reps


def forced_differential_candidates(target: LambdaElement, states: Sequence[PageState], chart: Chart,
                                   justification: str = "") -> List[Candidate]:
    """Pages and sources whose differential could hit ``target``.

    For ``target = lambda^m y`` at (s, f), a d_r with r - 1 <= m must come from
    (s + 1, f - r) and land on lambda^(r-1) times a class alive in exponent
    ``m - r + 1``.  ``states`` are engine pages; for each r the page-r state
    is used when present, else the latest one.  ``justification`` is only
    carried for reports.
    """
    if target.is_zero:
        return []
    s, f = bidegree_of_sum(target.support, chart)
    m = target.k
    by_page = {st.page: st for st in states}
    latest = max(states, key=lambda st: st.page)
    start = min(st.page for st in states)
    out = []
    for r in range(max(2, start), m + 2):
        st = by_page.get(r, latest)
        bd = (s + 1, f - r)
        if bd[1] < 0:
            continue
        j = m - r + 1
        if st.truncation is not INF and j + r - 1 >= st.truncation:
            continue
        reps = _quotient_reps(st, bd, j)
        if reps:
            names = st._builder.basis[bd]
            out.append(Candidate(r, bd, tuple(
                tuple(nm for i, nm in enumerate(names) if (v >> i) & 1) for v in reps
            )))
    return out


def is_active(rec: DifferentialRecord, truncation) -> bool:
    """A d_r survives truncation k only when lambda^(r-1) is nonzero mod lambda^k."""
    return truncation is INF or rec.page - 1 < truncation


@dataclass(frozen=True)
class Crossing:
    record: DifferentialRecord
    end: str  # "source" or "target"
    filt: int


def crossing_differential_scan(chart: Chart, home: Tuple[int, int], f_lo: int, f_hi: int, page: int,
                               truncation=None) -> List[Crossing]:
    """Later differentials touching the stem column strictly between f_lo and f_hi.

    A d_r' with r' > page counts when its source or target generator sits in
    stem ``home[0]`` at a filtration strictly inside (f_lo, f_hi) that can
    reach synthetic degree ``home[1]``, and it is not killed by truncation.
    An empty result is the no-crossing certificate for exactly this test.
    """
    k = chart.truncation if truncation is None else truncation
    s, d = home
    out = []
    for rec in sorted(chart.differentials, key=lambda r: (r.page, r.source)):
        if rec.page <= page or not is_active(rec, k):
            continue
        for end, support in (("source", rec.source), ("target", rec.target)):
            if not support:
                continue
            gs, gf = bidegree_of_sum(support, chart)
            if gs == s and f_lo < gf < f_hi and gf >= d:
                out.append(Crossing(rec, end, gf))
    return out


def audit_document(doc, einf: Optional[PageState] = None) -> List[Finding]:
    """Every finding for a leniently parsed document: lambda rule, chart invariants, tables."""
    from .chart import validate_chart

    return sorted(set(doc.violations) | set(validate_chart(doc.chart)) | set(check_tables(doc.chart, einf)))

"""Classical and synthetic Adams chart data.

Gradings: an E2 generator in stem ``s`` and Adams filtration ``f`` has
synthetic degree ``f``; multiplication by lambda keeps ``(s, f)`` and lowers
the synthetic degree by one.  A classical differential ``d_r(x) = y`` becomes
``d_r(x) = lambda^(r-1) y`` synthetically, so the tri-degree moves by
``(-1, +r, +1)``.

Generator names are opaque strings.  GF(2) sums of generators are stored as
sorted tuples of distinct names.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import ChartError, InhomogeneousError, ZeroElementError


class _Infinity:
    """Sentinel for an untruncated chart (lambda-power truncation k = infinity)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("synsseq-inf")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

# tau in motivic bidegree (0, -1) maps to lambda^2
TAU_LAMBDA_POWER = 2

_DISPLAY = [
    ("D-", "Δ"),
    ("kb", "κ̄"),
    ("2~", "2̃"),
    ("theta", "θ"),
    ("eta", "η"),
    ("nu", "ν"),
    ("mu", "μ"),
    ("beta", "β"),
    ("alpha", "α"),
    ("gamma", "γ"),
]


def display_name(name: str) -> str:
    """Unicode rendering of a transliterated generator or class name."""
    out = name
    for ascii_form, uni in _DISPLAY:
        out = out.replace(ascii_form, uni)
    return out


@dataclass(frozen=True, order=True)
class TriDegree:
    s: int
    f: int
    d: int

    @property
    def lambda_exponent(self) -> int:
        return self.f - self.d

    def times_lambda(self, k: int = 1) -> "TriDegree":
        return TriDegree(self.s, self.f, self.d - k)

    def __add__(self, other):
        return TriDegree(self.s + other[0], self.f + other[1], self.d + other[2])

    def __getitem__(self, i):
        return (self.s, self.f, self.d)[i]

    def __str__(self):
        return f"({self.s},{self.f},{self.d})"


@dataclass(frozen=True, order=True)
class Generator:
    name: str
    stem: int
    filt: int

    @property
    def bidegree(self) -> Tuple[int, int]:
        return (self.stem, self.filt)

    @property
    def syndeg(self) -> int:
        return self.filt


def gf2_sum(names: Iterable[str]) -> Tuple[str, ...]:
    """Canonical GF(2) sum: repeated names cancel in pairs; result is sorted."""
    odd = set()
    for n in names:
        odd ^= {n}
    return tuple(sorted(odd))


@dataclass(frozen=True, order=True)
class LambdaElement:
    """``lambda^k`` times a GF(2) combination of same-bidegree generators."""

    k: int
    support: Tuple[str, ...]

    def __post_init__(self):
        if self.k < 0:
            raise ChartError(f"negative lambda exponent {self.k}")
        object.__setattr__(self, "support", gf2_sum(self.support))

    @classmethod
    def zero(cls) -> "LambdaElement":
        return cls(0, ())

    @property
    def is_zero(self) -> bool:
        return not self.support

    def times_lambda(self, j: int = 1) -> "LambdaElement":
        return LambdaElement(self.k + j, self.support)

    def __str__(self):
        if self.is_zero:
            return "0"
        body = "+".join(self.support)
        if self.k == 0:
            return body
        return f"l^{self.k} {body}"


@dataclass(frozen=True, order=True)
class ProductRecord:
    multiplier: str
    operand: str
    result: Tuple[str, ...]


@dataclass(frozen=True, order=True)
class DifferentialRecord:
    """Classical ``d_page(source) = target``; synthetic value carries lambda^(page-1)."""

    page: int
    source: Tuple[str, ...]
    target: Tuple[str, ...]
    at: Optional[TriDegree] = None

    @property
    def lambda_exponent(self) -> int:
        return self.page - 1

    @property
    def synthetic_target(self) -> LambdaElement:
        return LambdaElement(self.page - 1, self.target) if self.target else LambdaElement.zero()

    @property
    def record_id(self) -> str:
        return f"diff:{self.page}:{'+'.join(self.source)}"


@dataclass(frozen=True, order=True)
class ExtensionRecord:
    kind: str
    source: LambdaElement
    target: LambdaElement
    at: Optional[TriDegree] = None

    @property
    def record_id(self) -> str:
        return f"ext:{self.kind}:{self.source}"


@dataclass(frozen=True, order=True)
class ClassDecl:
    name: str
    stem: int
    syndeg: int
    detector: Optional[LambdaElement] = None
    relations: Tuple[str, ...] = ()


@dataclass(frozen=True, order=True)
class BracketRecord:
    entries: Tuple[str, ...]
    home: Tuple[int, int]
    detectors: Tuple[LambdaElement, ...]
    indet: str = ""

    @property
    def record_id(self) -> str:
        return f"bracket:<{','.join(self.entries)}>"


@dataclass(frozen=True, order=True)
class CellComplex:
    name: str
    cells: Tuple[Tuple[int, int], ...]
    attachments: Tuple[Tuple[int, int, str], ...] = ()


@dataclass(frozen=True)
class Window:
    s_min: int
    s_max: int
    f_min: int
    f_max: int

    def contains(self, s: int, f: int) -> bool:
        return self.s_min <= s <= self.s_max and self.f_min <= f <= self.f_max

    def __str__(self):
        return f"{self.s_min}..{self.s_max},{self.f_min}..{self.f_max}"


@dataclass(frozen=True)
class Chart:
    generators: Tuple[Generator, ...] = ()
    products: Tuple[ProductRecord, ...] = ()
    differentials: Tuple[DifferentialRecord, ...] = ()
    truncation: object = INF
    synthetic: bool = True
    windows: Tuple[Window, ...] = ()
    extensions: Tuple[ExtensionRecord, ...] = ()
    classes: Tuple[ClassDecl, ...] = ()
    brackets: Tuple[BracketRecord, ...] = ()
    complexes: Tuple[CellComplex, ...] = ()
    _index: Dict[str, Generator] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        index = {}
        for g in self.generators:
            if g.name in index:
                raise ChartError(f"duplicate generator name {g.name!r}")
            index[g.name] = g
        object.__setattr__(self, "_index", index)
        t = self.truncation
        if t is not INF and (not isinstance(t, int) or t < 1):
            raise ChartError(f"truncation must be a positive integer or INF, got {t!r}")

    def generator(self, name: str) -> Generator:
        try:
            return self._index[name]
        except KeyError:
            raise ChartError(f"unknown generator {name!r}") from None

    def has_generator(self, name: str) -> bool:
        return name in self._index

    def generators_at(self, s: int, f: int) -> List[Generator]:
        return sorted((g for g in self.generators if g.stem == s and g.filt == f), key=lambda g: g.name)

    def bidegrees(self) -> List[Tuple[int, int]]:
        return sorted({g.bidegree for g in self.generators})

    def class_decl(self, name: str) -> Optional[ClassDecl]:
        for c in self.classes:
            if c.name == name:
                return c
        return None

    def product(self, a: str, b: str) -> Optional[Tuple[str, ...]]:
        for p in self.products:
            if (p.multiplier, p.operand) in ((a, b), (b, a)):
                return p.result
        return None

    def covers(self, s: int, f: int) -> bool:
        """True when the chart claims complete knowledge of Ext at (s, f)."""
        if f < 0 or s < 0:
            return True
        return any(w.contains(s, f) for w in self.windows)

    def is_empty_at(self, s: int, f: int) -> Optional[bool]:
        """Emptiness of Ext at (s, f); None when the chart does not cover it."""
        if f < 0 or s < 0:
            return True
        if f == 0:
            return s != 0
        if self.generators_at(s, f):
            return False
        return True if self.covers(s, f) else None

    def bounding_window(self) -> Window:
        if self.windows:
            return Window(
                min(w.s_min for w in self.windows),
                max(w.s_max for w in self.windows),
                min(w.f_min for w in self.windows),
                max(w.f_max for w in self.windows),
            )
        if not self.generators:
            return Window(0, 0, 0, 0)
        return Window(
            min(g.stem for g in self.generators),
            max(g.stem for g in self.generators),
            min(g.filt for g in self.generators),
            max(g.filt for g in self.generators),
        )

    def with_records(self, **kw) -> "Chart":
        return replace(self, **kw)

    def canonical(self) -> "Chart":
        """Same records, in the order the writer emits them."""
        return replace(
            self,
            windows=tuple(sorted(self.windows, key=lambda w: (w.s_min, w.s_max, w.f_min, w.f_max))),
            generators=tuple(sorted(self.generators, key=lambda g: (g.stem, g.filt, g.name))),
            products=tuple(sorted(set(self.products), key=lambda p: (p.multiplier, p.operand, p.result))),
            differentials=tuple(sorted(set(self.differentials), key=lambda d: (d.page, d.source, d.target))),
            extensions=tuple(sorted(set(self.extensions), key=lambda e: (e.kind, e.source, e.target))),
            classes=tuple(sorted(self.classes, key=lambda k: k.name)),
            brackets=tuple(sorted(set(self.brackets), key=lambda b: (b.home, b.entries))),
            complexes=tuple(
                replace(cx, attachments=tuple(sorted(cx.attachments)))
                for cx in sorted(self.complexes, key=lambda x: x.name)
            ),
        )


# -- operations ---------------------------------------------------------------

def bidegree_of_sum(support: Tuple[str, ...], chart: Chart) -> Tuple[int, int]:
    if not support:
        raise ZeroElementError("zero element has no bidegree")
    degs = {chart.generator(n).bidegree for n in support}
    if len(degs) != 1:
        raise InhomogeneousError(f"support {'+'.join(support)} spans bidegrees {sorted(degs)}")
    return degs.pop()


def tri_degree_of(e: LambdaElement, chart: Chart) -> TriDegree:
    s, f = bidegree_of_sum(e.support, chart)
    return TriDegree(s, f, f - e.k)


def motivic_to_synthetic_degree(s: int, w: int) -> Tuple[int, int]:
    """Motivic (stem, weight) -> synthetic (stem, synthetic degree)."""
    return (s, 2 * w - s)


def lift_to_synthetic(classical: Chart) -> Chart:
    if classical.synthetic:
        raise ChartError("chart is already synthetic")
    if classical.truncation is not INF:
        raise ChartError("a classical chart cannot carry a lambda truncation")
    findings = validate_chart(classical)
    if findings:
        raise ChartError(f"classical chart is invalid: {findings[0].message}")
    return replace(classical, synthetic=True)


def specialize_to_classical(chart: Chart) -> Chart:
    """Drop lambda: the inverse of :func:`lift_to_synthetic`."""
    return replace(chart, synthetic=False, truncation=INF)


@dataclass(frozen=True, order=True)
class Finding:
    severity: str
    record_id: str
    message: str

    def __str__(self):
        return f"{self.severity} {self.record_id} {self.message}"


def _homogeneity(support, chart, rid, what, out) -> Optional[Tuple[int, int]]:
    missing = [n for n in support if not chart.has_generator(n)]
    if missing:
        for n in missing:
            out.append(Finding("ERROR", rid, f"{what} references unknown generator {n}"))
        return None
    if not support:
        return None
    degs = sorted({chart.generator(n).bidegree for n in support})
    if len(degs) > 1:
        out.append(Finding("ERROR", rid, f"{what} is inhomogeneous: bidegrees {degs}"))
        return None
    return degs[0]


def validate_chart(chart: Chart) -> List[Finding]:
    """Every violated invariant, sorted; an empty list means the chart is valid."""
    out: List[Finding] = []
    for g in chart.generators:
        if g.filt < 0:
            out.append(Finding("ERROR", f"gen:{g.name}", f"negative filtration {g.filt}"))
    for p in chart.products:
        rid = f"prod:{p.multiplier}*{p.operand}"
        a = _homogeneity((p.multiplier,), chart, rid, "multiplier", out)
        b = _homogeneity((p.operand,), chart, rid, "operand", out)
        c = _homogeneity(p.result, chart, rid, "result", out)
        if a and b and c and (a[0] + b[0], a[1] + b[1]) != c:
            out.append(Finding("ERROR", rid, f"result at {c} but factors sum to {(a[0] + b[0], a[1] + b[1])}"))
    k = chart.truncation
    for d in chart.differentials:
        rid = d.record_id
        if d.page < 2:
            out.append(Finding("ERROR", rid, f"page {d.page} < 2"))
        src = _homogeneity(d.source, chart, rid, "source", out)
        if not d.source:
            out.append(Finding("ERROR", rid, "empty source"))
        tgt = _homogeneity(d.target, chart, rid, "target", out)
        if src and tgt and tgt != (src[0] - 1, src[1] + d.page):
            out.append(Finding(
                "ERROR", rid,
                f"target at {tgt} but d_{d.page} from {src} lands in {(src[0] - 1, src[1] + d.page)}",
            ))
        if src and d.at is not None and d.at != TriDegree(src[0], src[1], src[1]):
            out.append(Finding("ERROR", rid, f"declared degree {d.at} but source sits at {src + (src[1],)}"))
        if chart.synthetic and k is not INF and d.target and d.lambda_exponent >= k:
            out.append(Finding("ERROR", rid, f"lambda^{d.lambda_exponent} is zero at truncation {k}"))
    kinds = {c.name for c in chart.classes}
    for e in chart.extensions:
        rid = e.record_id
        if e.kind not in kinds:
            out.append(Finding("ERROR", rid, f"extension kind {e.kind} is not declared"))
        _homogeneity(e.source.support, chart, rid, "source", out)
        _homogeneity(e.target.support, chart, rid, "target", out)
        if chart.synthetic and k is not INF:
            for el in (e.source, e.target):
                if not el.is_zero and el.k >= k:
                    out.append(Finding("ERROR", rid, f"lambda^{el.k} is zero at truncation {k}"))
    for c in chart.classes:
        if c.detector is not None and not c.detector.is_zero:
            _homogeneity(c.detector.support, chart, f"class:{c.name}", "detector", out)
    for b in chart.brackets:
        for det in b.detectors:
            _homogeneity(det.support, chart, b.record_id, "detector", out)
    return sorted(set(out))

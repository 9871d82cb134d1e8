"""Synthetic Adams spectral sequence pages.

Each bidegree ``(s, f)`` of the E_r page is stored as a subquotient of the
E2 module ``F2[lambda]/lambda^K (x) V`` where ``V`` is spanned by the chart
generators at ``(s, f)``.  The element ``lambda^j v`` sits in synthetic degree
``f - j``; the page is described by two increasing filtrations of ``V``::

    Z^0 <= Z^1 <= ...      (v with lambda^j v a cycle)
    B^0 <= B^1 <= ...      (v with lambda^j v a boundary)

and ``E_r`` in exponent ``j`` is ``Z^j / B^j``.  A page-r differential acts as
``lambda^(r-1) D`` for a GF(2)-linear ``D``, which updates the filtrations
directly.  Module decompositions are read off with a graded Smith reduction.
"""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import gf2
from .chart import INF, Chart, DifferentialRecord, Window
from .errors import (
    ConsistencyError,
    EngineInvariantError,
    ExponentBoundError,
    InhomogeneousError,
    StaleDifferentialError,
    WindowError,
)
from .lambda_algebra import ModuleDecomposition, MonomialMatrix, Summand, monomial_smith_form

log = logging.getLogger(__name__)

Basis = Tuple[Tuple[int, int], ...]  # (birth exponent, vector) pairs, births ascending


@dataclass(frozen=True)
class _Filt:
    n: int
    Z: Basis
    B: Basis


def _at(basis: Basis, j) -> List[int]:
    return [v for b, v in basis if b <= j]


def _adapted(spaces: Sequence[Tuple[int, List[int]]], n: int) -> Basis:
    """Adapted basis from increasing subspaces given at ascending breakpoints."""
    out: List[Tuple[int, int]] = []
    current: List[int] = []
    for j, vecs in spaces:
        for v in gf2.span_basis(vecs, max(n, 1)):
            if not gf2.in_span(v, current, max(n, 1)):
                out.append((j, v))
                current.append(v)
    return tuple(out)


@dataclass(frozen=True)
class PageModule:
    page: int
    bidegree: Tuple[int, int]
    generators: Tuple[str, ...]
    decomposition: ModuleDecomposition

    def names(self, rep: int) -> Tuple[str, ...]:
        return tuple(g for i, g in enumerate(self.generators) if (rep >> i) & 1)

    def summands(self) -> List[Tuple[Tuple[str, ...], int, Optional[int]]]:
        """(representative names, lambda birth exponent, order or None)."""
        f = self.bidegree[1]
        return [(self.names(x.rep), f - x.degree, x.order) for x in self.decomposition.summands]

    @property
    def free_rank(self) -> int:
        return self.decomposition.free_rank


@dataclass(frozen=True)
class CensusEntry:
    record: DifferentialRecord
    target_bidegree: Tuple[int, int]
    order: int


@dataclass(frozen=True)
class PageState:
    page: int
    truncation: object
    window: Window
    modules: Tuple[PageModule, ...]
    r_max: int = 1
    census: Tuple[CensusEntry, ...] = ()
    final: bool = False
    differentials: Tuple[DifferentialRecord, ...] = ()
    chart: Optional[Chart] = field(default=None, compare=False, repr=False, hash=False)
    _filt: Optional[Dict[Tuple[int, int], _Filt]] = field(default=None, compare=False, repr=False, hash=False)
    _builder: object = field(default=None, compare=False, repr=False, hash=False)

    def module(self, s: int, f: int) -> Optional[PageModule]:
        for m in self.modules:
            if m.bidegree == (s, f):
                return m
        return None

    def module_map(self) -> Dict[Tuple[int, int], PageModule]:
        return {m.bidegree: m for m in self.modules}

    def is_safe(self, s: int, f: int) -> bool:
        """Whether every differential into or out of (s, f) stays inside the window."""
        if s == 0:
            return False  # h0-tower stem: towers are cut off by the window
        w = self.window
        if not w.contains(s, f):
            return False
        for r in range(2, max(self.r_max, 2) + 1):
            for (ss, ff) in ((s + 1, f - r), (s - 1, f + r)):
                if ff < 0:
                    continue
                if not w.contains(ss, ff):
                    return False
        return True

    def column_safe(self, s: int) -> bool:
        w = self.window
        return s != 0 and w.s_min < s < w.s_max

    def unsafe_bidegrees(self) -> List[Tuple[int, int]]:
        return [m.bidegree for m in self.modules if not self.is_safe(*m.bidegree)]

    def require_column(self, s: int):
        if not self.column_safe(s):
            raise WindowError(f"stem {s} is outside the safe window {self.window}")


def _e2_filt(n: int) -> _Filt:
    return _Filt(n, tuple((0, 1 << i) for i in range(n)), ())


def _decompose(f: int, filt: _Filt, truncation) -> ModuleDecomposition:
    Z, B = filt.Z, filt.B
    zvecs = [v for _, v in Z]
    col_deg = [f - b for b, _ in Z]
    rows, row_deg = [], []
    n = max(filt.n, 1)
    for c, bvec in B:
        usable = [i for i, (b, _) in enumerate(Z) if b <= c]
        sol = gf2.solve_combination(bvec, [zvecs[i] for i in usable], n)
        if sol is None:
            raise EngineInvariantError(f"boundary outside the cycles at filtration {f}")
        row = [0] * len(Z)
        for pos, i in enumerate(usable):
            if (sol >> pos) & 1:
                row[i] = 1
        rows.append(row)
        row_deg.append(f - c)
    if truncation is not INF:
        for i, (b, _) in enumerate(Z):
            row = [0] * len(Z)
            row[i] = 1
            rows.append(row)
            row_deg.append(f - truncation)
    pres = MonomialMatrix(np.array(rows, dtype=np.uint8).reshape(len(rows), len(Z)), tuple(row_deg), tuple(col_deg))
    coker = monomial_smith_form(pres).cokernel
    out = []
    for sm in coker.summands:
        order = sm.order
        if truncation is not INF and order is not None and (f - sm.degree) + order >= truncation:
            order = None
        out.append(Summand(sm.degree, order, gf2.combine(sm.rep, zvecs)))
    return ModuleDecomposition.of(out)


def _vec(names: Sequence[str], basis: Sequence[str]) -> int:
    idx = {g: i for i, g in enumerate(basis)}
    v = 0
    for nm in names:
        if nm not in idx:
            raise InhomogeneousError(f"{nm} is not in the expected bidegree (basis {', '.join(basis) or 'empty'})")
        v ^= 1 << idx[nm]
    return v


class _Builder:
    """Assembles PageStates from internal filtrations."""

    def __init__(self, chart: Chart, truncation, window: Window, r_max: int):
        self.chart = chart
        self.truncation = truncation
        self.window = window
        self.r_max = r_max
        self.basis = {bd: tuple(g.name for g in chart.generators_at(*bd)) for bd in chart.bidegrees()}

    def filt(self, filts, bd) -> _Filt:
        got = filts.get(bd)
        return got if got is not None else _e2_filt(len(self.basis.get(bd, ())))

    def state(self, page, filts, census=(), final=False) -> PageState:
        bound = None if self.truncation is INF else self.truncation - 1
        mods = []
        for bd, gens in sorted(self.basis.items()):
            fl = self.filt(filts, bd)
            top = max((b for b, _ in fl.Z + fl.B), default=0)
            limit = bound if bound is not None else max(self.r_max - 1, 0)
            if top > limit:
                raise ExponentBoundError(f"lambda exponent {top} at {bd} exceeds the run bound {limit}")
            mods.append(PageModule(page, bd, gens, _decompose(bd[1], fl, self.truncation)))
        return PageState(
            page, self.truncation, self.window, tuple(mods), self.r_max, tuple(census), final,
            tuple(self.chart.differentials), self.chart, dict(filts), self,
        )


def _r_max(chart: Chart) -> int:
    return max((d.page for d in chart.differentials), default=1)


def build_e2(chart: Chart, truncation=None, window: Optional[Window] = None,
             max_page: Optional[int] = None) -> PageState:
    """Free F2[lambda] (or F2[lambda]/lambda^k) module on the generators in each bidegree.

    ``max_page`` raises the longest page the state can be advanced through
    beyond the chart's own differentials.
    """
    k = chart.truncation if truncation is None else truncation
    b = _Builder(chart, k, window or chart.bounding_window(), max(_r_max(chart), max_page or 1))
    return b.state(2, {})


def _builder_of(state: PageState) -> _Builder:
    b = state._builder
    if b is None or state._filt is None:
        raise ValueError("state was not produced by the engine and cannot be advanced")
    return b


def apply_page(state: PageState, records: Sequence[DifferentialRecord], skip_stale: bool = False) -> PageState:
    """Take homology with respect to the page-r differentials."""
    b = _builder_of(state)
    r = state.page
    K = state.truncation
    filts = dict(state._filt)
    for rec in records:
        if rec.page != r:
            raise ValueError(f"record {rec.record_id} is for page {rec.page}, state is at page {r}")
    active = list(records)
    if K is not INF and r - 1 >= K:
        active = []  # lambda^(r-1) vanishes
    by_src: Dict[Tuple[int, int], List[DifferentialRecord]] = defaultdict(list)
    for rec in sorted(active, key=lambda d: (d.source, d.target)):
        s, f = b.chart.generator(rec.source[0]).bidegree
        by_src[(s, f)].append(rec)

    dmaps: Dict[Tuple[int, int], Tuple[Tuple[int, int], List[int], List[DifferentialRecord]]] = {}
    for src_bd, recs in sorted(by_src.items()):
        tgt_bd = (src_bd[0] - 1, src_bd[1] + r)
        sb = b.basis[src_bd]
        tb = b.basis.get(tgt_bd, ())
        n_src, n_tgt = len(sb), max(len(tb), 1)
        fs, ft = b.filt(filts, src_bd), b.filt(filts, tgt_bd)
        b_top = gf2.span_basis([v for _, v in fs.B], n_src)
        z0 = _at(fs.Z, 0)
        sources, images, kept = [], [], []
        for rec in recs:
            sv = _vec(rec.source, sb)
            tv = _vec(rec.target, tb) if rec.target else 0
            problem = None
            if not gf2.in_span(sv, z0, n_src):
                problem = "source does not survive to this page"
            elif gf2.in_span(sv, b_top, n_src):
                problem = "source was already hit by an earlier differential"
            elif tv and not gf2.in_span(tv, _at(ft.Z, r - 1), n_tgt):
                problem = "target does not survive to this page"
            elif tv and gf2.in_span(tv, _at(ft.B, r - 1), n_tgt):
                problem = "target was already hit by an earlier differential"
            if problem:
                if skip_stale:
                    log.warning("skipping stale differential %s: %s", rec.record_id, problem)
                    continue
                raise StaleDifferentialError(f"{rec.record_id}: {problem}")
            if gf2.in_span(sv, b_top + sources, n_src):
                raise ConsistencyError(f"{rec.record_id}: source is dependent on other page-{r} sources")
            sources.append(sv)
            images.append(tv)
            kept.append(rec)
        if not kept:
            continue
        # D vanishes on boundaries and on a standard-basis completion
        basis_u = list(b_top) + sources
        image_u = [0] * len(b_top) + images
        for i in range(n_src):
            e = 1 << i
            if not gf2.in_span(e, basis_u, n_src):
                basis_u.append(e)
                image_u.append(0)
        dcols = []
        for i in range(n_src):
            c = gf2.solve_combination(1 << i, basis_u, n_src)
            dcols.append(gf2.combine(c, image_u))
        dmaps[src_bd] = (tgt_bd, dcols, kept)

    def apply_d(dcols, v):
        out = 0
        i = 0
        while v:
            if v & 1:
                out ^= dcols[i]
            v >>= 1
            i += 1
        return out

    new = dict(filts)
    for src_bd, (tgt_bd, dcols, _) in dmaps.items():
        fs, ft = b.filt(filts, src_bd), b.filt(filts, tgt_bd)
        n_src, n_tgt = fs.n, max(ft.n, 1)
        breaks = {b_ for b_, _ in fs.Z} | {max(c - (r - 1), 0) for c, _ in ft.B} | {0}
        if K is not INF:
            breaks.add(K - r + 1)
            breaks = {j for j in breaks if j < K}
        spaces = []
        for j in sorted(breaks):
            zj = _at(fs.Z, j)
            if K is not INF and j + r - 1 >= K:
                spaces.append((j, zj))
                continue
            coeffs = gf2.preimage_coefficients([apply_d(dcols, z) for z in zj], _at(ft.B, j + r - 1), n_tgt)
            spaces.append((j, [gf2.combine(c, zj) for c in coeffs]))
        new[src_bd] = _Filt(fs.n, _adapted(spaces, n_src), fs.B)
    for src_bd, (tgt_bd, dcols, _) in dmaps.items():
        fs = b.filt(filts, src_bd)
        ft = new.get(tgt_bd) or b.filt(filts, tgt_bd)
        n_tgt = max(ft.n, 1)
        breaks = {c for c, _ in ft.B} | {z + r - 1 for z, _ in fs.Z}
        if K is not INF:
            breaks = {j for j in breaks if j < K}
        spaces = []
        for j in sorted(breaks):
            vecs = _at(ft.B, j)
            if j - r + 1 >= 0:
                vecs = vecs + [apply_d(dcols, z) for z in _at(fs.Z, j - r + 1)]
            spaces.append((j, vecs))
        new[tgt_bd] = _Filt(ft.n, ft.Z, _adapted(spaces, ft.n))
    # d o d = 0: images must be cycles of the new page at the target
    for src_bd, (tgt_bd, dcols, kept) in dmaps.items():
        fs = b.filt(filts, src_bd)
        ft_new = new.get(tgt_bd) or b.filt(filts, tgt_bd)
        n_tgt = max(ft_new.n, 1)
        for jz, z in fs.Z:
            img = apply_d(dcols, z)
            j = jz + r - 1
            if K is not INF and j >= K:
                continue
            if img and not gf2.in_span(img, _at(ft_new.Z, j), n_tgt):
                rec = kept[0]
                raise ConsistencyError(f"d o d != 0: image of page-{r} differential at {src_bd} ({rec.record_id}) "
                                       f"is not a cycle at {tgt_bd}")
    return b.state(r + 1, new)


def _census(state: PageState) -> Tuple[CensusEntry, ...]:
    b = _builder_of(state)
    out = []
    for rec in sorted(state.differentials, key=lambda d: (d.page, d.source)):
        if not rec.target:
            continue
        bd = b.chart.generator(rec.target[0]).bidegree
        out.append(CensusEntry(rec, bd, rec.page - 1))
    return tuple(out)


def check_census(state: PageState, census: Sequence[CensusEntry]):
    """Torsion summands of order r-1 at each bidegree must match the d_r records hitting it."""
    want: Dict[Tuple[Tuple[int, int], int], int] = defaultdict(int)
    for c in census:
        want[(c.target_bidegree, c.order)] += 1
    have: Dict[Tuple[Tuple[int, int], int], int] = defaultdict(int)
    for m in state.modules:
        for _, birth, order in m.summands():
            if order is not None:
                if birth != 0:
                    raise EngineInvariantError(f"torsion summand at {m.bidegree} born at lambda^{birth}")
                have[(m.bidegree, order)] += 1
    if dict(want) != dict(have):
        missing = sorted(set(want.items()) ^ set(have.items()))
        raise EngineInvariantError(f"torsion census mismatch: {missing}")


def run_to_infinity(chart: Chart, truncation=None, window: Optional[Window] = None,
                    skip_stale: bool = False) -> PageState:
    state = build_e2(chart, truncation, window)
    b = _builder_of(state)
    by_page: Dict[int, List[DifferentialRecord]] = defaultdict(list)
    for d in chart.differentials:
        by_page[d.page].append(d)
    for r in range(2, b.r_max + 1):
        state = apply_page(state, by_page.get(r, []), skip_stale=skip_stale)
    census = _census(state)
    if state.truncation is INF and not skip_stale:
        check_census(state, census)
    return b.state(state.page, state._filt, census, final=True)


def classical_specialization(state: PageState) -> Dict[Tuple[int, int], int]:
    """Invert lambda: the free rank in each bidegree."""
    return {m.bidegree: m.free_rank for m in state.modules}


def classical_ranks(chart: Chart) -> Dict[Tuple[int, int], int]:
    """Classical E-infinity ranks from plain GF(2) cycles and boundaries (lambda = 1)."""
    basis = {bd: tuple(g.name for g in chart.generators_at(*bd)) for bd in chart.bidegrees()}
    Z = {bd: [1 << i for i in range(len(g))] for bd, g in basis.items()}
    B: Dict[Tuple[int, int], List[int]] = {bd: [] for bd in basis}
    pages = sorted({d.page for d in chart.differentials})
    for r in pages:
        recs = [d for d in chart.differentials if d.page == r]
        groups: Dict[Tuple[int, int], List[DifferentialRecord]] = defaultdict(list)
        for d in recs:
            groups[chart.generator(d.source[0]).bidegree].append(d)
        updates_z, updates_b = {}, defaultdict(list)
        for bd, ds in groups.items():
            tgt = (bd[0] - 1, bd[1] + r)
            n = len(basis[bd])
            dom = list(B[bd])
            img = [0] * len(dom)
            for d in ds:
                dom.append(_vec(d.source, basis[bd]))
                img.append(_vec(d.target, basis.get(tgt, ())) if d.target else 0)
            for i in range(n):
                if not gf2.in_span(1 << i, dom, n):
                    dom.append(1 << i)
                    img.append(0)

            def dmap(v, dom=dom, img=img, n=n):
                return gf2.combine(gf2.solve_combination(v, dom, n), img)

            nt = max(len(basis.get(tgt, ())), 1)
            imgs = [dmap(z) for z in Z[bd]]
            coeffs = gf2.preimage_coefficients(imgs, B.get(tgt, []), nt)
            updates_z[bd] = [gf2.combine(c, Z[bd]) for c in coeffs]
            updates_b[tgt].extend(imgs)
        for bd, zs in updates_z.items():
            Z[bd] = gf2.span_basis(zs, max(len(basis[bd]), 1))
        for bd, bs in updates_b.items():
            B[bd] = gf2.span_basis(B[bd] + bs, max(len(basis[bd]), 1))
    return {bd: len(Z[bd]) - len(B[bd]) for bd in basis}

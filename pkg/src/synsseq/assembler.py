"""Bigraded homotopy from E-infinity data, and classical 2-local groups."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .chart import INF, Chart, ExtensionRecord
from .engine import PageState
from .errors import DegreeError, PartitionError, WindowError

H0 = "h0"
TWO_TILDE = "2~"
LAMBDA_EXT = "l"


@dataclass(frozen=True)
class ColumnEntry:
    rep: Tuple[str, ...]
    filt: int
    lambda_power: int  # the entry is lambda^j times the summand generator
    order: Optional[int]  # of the cyclic summand it lies in; None when free
    summand: int  # index of that summand within the column


@dataclass(frozen=True)
class HomotopyColumn:
    stem: int
    syndeg: int
    entries: Tuple[ColumnEntry, ...] = ()
    merge_possible: bool = False

    @property
    def dim(self) -> int:
        return len(self.entries)

    def free_entries(self) -> List[ColumnEntry]:
        return [e for e in self.entries if e.order is None]


@dataclass(frozen=True)
class _Cyclic:
    rep: Tuple[str, ...]
    stem: int
    filt: int
    birth: int
    order: Optional[int]  # effective, ceiling already applied

    @property
    def degree(self) -> int:
        return self.filt - self.birth

    def contains(self, d: int) -> bool:
        j = self.filt - d
        return j >= self.birth and (self.order is None or j < self.birth + self.order)


def _cyclics(einf: PageState, stem: Optional[int] = None) -> List[_Cyclic]:
    out = []
    K = einf.truncation
    for m in einf.modules:
        s, f = m.bidegree
        if stem is not None and s != stem:
            continue
        for rep, birth, order in m.summands():
            if order is None and K is not INF:
                order = K - birth
            out.append(_Cyclic(rep, s, f, birth, order))
    return out


def assemble_column(einf: PageState, s: int, d: int,
                    extensions: Iterable[ExtensionRecord] = (), allow_unsafe: bool = False) -> HomotopyColumn:
    """Homotopy in degree (s, d) as a list of E-infinity layers.

    ``extensions`` of kind ``l`` record hidden lambda-multiplications
    ``lambda * x = y``; they glue the summand ending at ``x`` onto the one
    generated by ``y``.
    """
    if not allow_unsafe and not einf.column_safe(s):
        raise WindowError(f"column ({s},{d}) is outside the safe window {einf.window}")
    cyc = sorted(_cyclics(einf, s), key=lambda c: (c.filt, c.rep))
    # union-find over hidden lambda links
    parent = list(range(len(cyc)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    by_rep = {c.rep: i for i, c in enumerate(cyc)}
    for ext in extensions:
        if ext.kind != LAMBDA_EXT:
            continue
        a, b = by_rep.get(ext.source.support), by_rep.get(ext.target.support)
        if a is None or b is None:
            continue
        parent[find(b)] = find(a)
    groups: Dict[int, List[int]] = defaultdict(list)
    for i in range(len(cyc)):
        groups[find(i)].append(i)
    order_of: Dict[int, Optional[int]] = {}
    for root, members in groups.items():
        if any(cyc[i].order is None for i in members):
            order_of[root] = None
        else:
            order_of[root] = sum(cyc[i].order for i in members)
    entries = []
    for i, c in enumerate(cyc):
        if c.contains(d):
            root = find(i)
            j = c.filt - d
            offset = sum(cyc[k].order or 0 for k in groups[root] if cyc[k].filt < c.filt)
            entries.append(ColumnEntry(c.rep, c.filt, j - c.birth + offset, order_of[root], root))
    entries.sort(key=lambda e: (e.filt, e.rep))
    # a hidden lambda-extension could glue a torsion summand onto a higher layer
    merge = any(
        u.order is not None and v.filt > u.filt and v.degree == u.degree - u.order
        for u in cyc for v in cyc
        if u.contains(d) or v.contains(d)
    )
    return HomotopyColumn(s, d, tuple(entries), merge)


# -- classical groups ----------------------------------------------------------

@dataclass(frozen=True)
class ChainNode:
    rep: Tuple[str, ...]
    stem: int
    filt: int


@dataclass(frozen=True)
class TwoExtensionChain:
    nodes: Tuple[ChainNode, ...]
    hidden: Tuple[bool, ...] = ()  # one flag per link
    unbounded: bool = False

    def __post_init__(self):
        if not self.hidden:
            object.__setattr__(self, "hidden", (False,) * max(len(self.nodes) - 1, 0))
        if len(self.hidden) != max(len(self.nodes) - 1, 0):
            raise ValueError("one hidden flag per link")


@dataclass(frozen=True)
class GroupResolution:
    exponents: Tuple[int, ...]  # Z/2^e factors, sorted
    free_rank: int = 0

    @property
    def orders(self) -> Tuple[int, ...]:
        return tuple(2 ** e for e in self.exponents)

    def __str__(self):
        if not self.exponents and not self.free_rank:
            return "0"
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        for e in sorted(set(self.exponents)):
            n = self.exponents.count(e)
            parts.append(f"Z/{2 ** e}" if n == 1 else f"(Z/{2 ** e})^{n}")
        return " + ".join(parts)


def resolve_classical_group(free_summands: Sequence[ChainNode],
                            chains: Sequence[TwoExtensionChain] = ()) -> GroupResolution:
    """Each chain of length m+1 is a Z/2^(m+1); leftover summands are Z/2."""
    members = {n.rep: n for n in free_summands}
    used: Dict[Tuple[str, ...], int] = {}
    exps, free = [], 0
    for ci, ch in enumerate(chains):
        for a, b in zip(ch.nodes, ch.nodes[1:]):
            if a.stem != b.stem:
                raise DegreeError(f"chain link {'+'.join(a.rep)} -> {'+'.join(b.rep)} changes stem")
            if b.filt <= a.filt:
                raise DegreeError(f"chain link {'+'.join(a.rep)} -> {'+'.join(b.rep)} does not raise filtration")
        for n in ch.nodes:
            if n.rep not in members:
                raise PartitionError(f"{'+'.join(n.rep)} is not a lambda-free summand of the column")
            if n.rep in used:
                raise PartitionError(f"{'+'.join(n.rep)} lies on two chains")
            used[n.rep] = ci
        if ch.unbounded:
            free += 1
        elif ch.nodes:
            exps.append(len(ch.nodes))
    exps.extend(1 for r in members if r not in used)
    return GroupResolution(tuple(sorted(exps)), free)


def free_summands(einf: PageState, stem: int) -> List[ChainNode]:
    """Lambda-free E-infinity summands in a stem, in increasing filtration."""
    if einf.truncation is not INF:
        raise ValueError("classical groups need an untruncated E-infinity page")
    return sorted(
        (ChainNode(c.rep, c.stem, c.filt) for c in _cyclics(einf, stem) if c.order is None),
        key=lambda n: (n.filt, n.rep),
    )


def derive_chains(einf: PageState, chart: Chart, stem: int,
                  extensions: Iterable[ExtensionRecord] = ()) -> List[TwoExtensionChain]:
    """Chains from h0-products between surviving classes plus hidden 2~ records."""
    nodes = {n.rep: n for n in free_summands(einf, stem)}
    nxt: Dict[Tuple[str, ...], Tuple[Tuple[str, ...], bool]] = {}

    def link(a, b, hidden):
        if a in nodes and b in nodes:
            if a in nxt and nxt[a][0] != b:
                raise PartitionError(f"{'+'.join(a)} has two 2-extension targets")
            nxt[a] = (b, hidden)

    for p in chart.products:
        if H0 in (p.multiplier, p.operand):
            other = p.operand if p.multiplier == H0 else p.multiplier
            link((other,), p.result, False)
    for e in list(chart.extensions) + list(extensions):
        if e.kind == TWO_TILDE and not e.target.is_zero:
            link(e.source.support, e.target.support, True)
    targets = {b for b, _ in nxt.values()}
    f_top = einf.window.f_max
    chains = []
    for start in sorted(nodes, key=lambda r: (nodes[r].filt, r)):
        if start in targets:
            continue
        path, flags = [nodes[start]], []
        cur = start
        seen = {start}
        while cur in nxt:
            cur, hidden = nxt[cur]
            if cur in seen:
                raise PartitionError(f"2-extension cycle through {'+'.join(cur)}")
            seen.add(cur)
            path.append(nodes[cur])
            flags.append(hidden)
        unbounded = stem == 0 and path[-1].filt >= f_top
        chains.append(TwoExtensionChain(tuple(path), tuple(flags), unbounded))
    return chains


def classical_group(einf: PageState, chart: Chart, stem: int,
                    extensions: Iterable[ExtensionRecord] = (), allow_unsafe: bool = False) -> GroupResolution:
    if not allow_unsafe and not einf.column_safe(stem):
        raise WindowError(f"stem {stem} is outside the safe window {einf.window}")
    return resolve_classical_group(free_summands(einf, stem), derive_chains(einf, chart, stem, extensions))


# -- Bockstein sequence --------------------------------------------------------

@dataclass(frozen=True)
class LesReport:
    k: int
    checked: int
    failures: Tuple[Tuple[int, int, int, int], ...] = ()  # (s, d, expected, found)

    @property
    def ok(self) -> bool:
        return not self.failures


def bockstein_les_check(full: PageState, truncated: PageState, k: int,
                        stems: Optional[Iterable[int]] = None) -> LesReport:
    """Compare pi(S/lambda^k) with the lambda^k long exact sequence.

    dim pi_{s,d}(S/l^k) = dim coker(l^k: pi_{s,d+k} -> pi_{s,d})
                        + dim ker(l^k: pi_{s-1,d+k+1} -> pi_{s-1,d+1})
    computed from the direct-sum module structure of ``full``.
    """
    if full.truncation is not INF or truncated.truncation != k:
        raise ValueError("expected an untruncated run and a run truncated at k")
    cyc_full = _cyclics(full)
    cyc_tr = _cyclics(truncated)
    all_stems = sorted({c.stem for c in cyc_full} | {c.stem for c in cyc_tr})
    stems = sorted(set(stems)) if stems is not None else all_stems
    by_stem_full: Dict[int, List[_Cyclic]] = defaultdict(list)
    for c in cyc_full:
        by_stem_full[c.stem].append(c)

    def coker(s, d):
        return sum(1 for c in by_stem_full[s] if c.contains(d) and not c.contains(d + k))

    def ker(s, d):  # l^k out of degree d
        return sum(1 for c in by_stem_full[s] if c.contains(d) and not c.contains(d - k))

    degrees = set()
    for c in cyc_full + cyc_tr:
        top = c.degree
        low = c.filt - (c.birth + (c.order if c.order is not None else k + max(c.filt, 0) + 1))
        for d in range(low, top + 1):
            degrees.add((c.stem, d))
            degrees.add((c.stem + 1, d - k - 1))
    failures, checked = [], 0
    for s, d in sorted(degrees):
        if s not in stems:
            continue
        expected = coker(s, d) + ker(s - 1, d + k + 1)
        found = sum(1 for c in cyc_tr if c.stem == s and c.contains(d))
        checked += 1
        if expected != found:
            failures.append((s, d, expected, found))
    return LesReport(k, checked, tuple(failures))

"""Graded linear algebra over F2[lambda], lambda in internal degree -1.

A graded free module is a list of generator degrees.  A degree-preserving map
between two of them is a :class:`MonomialMatrix`: every nonzero entry is a
monomial ``lambda^k`` whose exponent is forced by the grading,
``k = col_deg[j] - row_deg[i]``.  So the matrix is stored as a GF(2)
coefficient array plus the two degree vectors.

Conventions follow row vectors: a matrix with rows indexed by the source
generators and columns by the target generators sends ``x`` to ``x M``.  The
cokernel of ``M`` is therefore ``F^cols / rowspace``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import gf2
from .errors import CompositionError, ExponentBoundError, GradingError


@dataclass(eq=False)
class MonomialMatrix:
    coeffs: np.ndarray
    row_deg: Tuple[int, ...]
    col_deg: Tuple[int, ...]
    row_names: Optional[Tuple[str, ...]] = None
    col_names: Optional[Tuple[str, ...]] = None
    max_exponent: Optional[int] = None

    def __post_init__(self):
        self.coeffs = (np.asarray(self.coeffs, dtype=np.uint8) & 1).reshape(len(self.row_deg), len(self.col_deg))
        self.row_deg = tuple(int(d) for d in self.row_deg)
        self.col_deg = tuple(int(d) for d in self.col_deg)
        for i, j in zip(*np.nonzero(self.coeffs)):
            k = self.col_deg[j] - self.row_deg[i]
            if k < 0:
                raise GradingError(f"entry ({i},{j}) would need lambda^{k}")
            if self.max_exponent is not None and k > self.max_exponent:
                raise ExponentBoundError(f"entry ({i},{j}) has lambda^{k}, bound is {self.max_exponent}")

    @property
    def shape(self):
        return self.coeffs.shape

    def exponent(self, i: int, j: int) -> Optional[int]:
        if not self.coeffs[i, j]:
            return None
        return self.col_deg[j] - self.row_deg[i]

    @classmethod
    def zeros(cls, row_deg: Sequence[int], col_deg: Sequence[int]) -> "MonomialMatrix":
        return cls(np.zeros((len(row_deg), len(col_deg)), dtype=np.uint8), tuple(row_deg), tuple(col_deg))

    @classmethod
    def from_exponents(cls, entries, *, row_deg=None, col_deg=None, max_exponent=None) -> "MonomialMatrix":
        """Build from a nested list whose entries are ``None`` (zero) or a lambda exponent.

        Missing degree vectors are inferred from the entries; inconsistent
        exponents raise :class:`GradingError`.
        """
        entries = [list(r) for r in entries]
        m = len(entries)
        n = len(entries[0]) if m else (len(col_deg) if col_deg is not None else 0)
        if any(len(r) != n for r in entries):
            raise GradingError("ragged entry list")
        coeffs = np.zeros((m, n), dtype=np.uint8)
        for i in range(m):
            for j in range(n):
                if entries[i][j] is not None:
                    coeffs[i, j] = 1
        if row_deg is None or col_deg is None:
            row_deg, col_deg = _infer_degrees(entries, m, n, row_deg, col_deg)
        for i in range(m):
            for j in range(n):
                k = entries[i][j]
                if k is not None and col_deg[j] - row_deg[i] != k:
                    raise GradingError(f"entry ({i},{j}) = lambda^{k} is inconsistent with the grading")
        return cls(coeffs, tuple(row_deg), tuple(col_deg), max_exponent=max_exponent)

    def __eq__(self, other):
        return (
            isinstance(other, MonomialMatrix)
            and self.row_deg == other.row_deg
            and self.col_deg == other.col_deg
            and np.array_equal(self.coeffs, other.coeffs)
        )


def _infer_degrees(entries, m, n, row_deg, col_deg):
    rdeg: List[Optional[int]] = list(row_deg) if row_deg is not None else [None] * m
    cdeg: List[Optional[int]] = list(col_deg) if col_deg is not None else [None] * n

    def visit(start_kind, start):
        queue = deque([(start_kind, start)])
        while queue:
            kind, idx = queue.popleft()
            if kind == "r":
                for j in range(n):
                    k = entries[idx][j]
                    if k is None:
                        continue
                    want = rdeg[idx] + k
                    if cdeg[j] is None:
                        cdeg[j] = want
                        queue.append(("c", j))
                    elif cdeg[j] != want:
                        raise GradingError(f"entry ({idx},{j}) = lambda^{k} is inconsistent with the grading")
            else:
                for i in range(m):
                    k = entries[i][idx]
                    if k is None:
                        continue
                    want = cdeg[idx] - k
                    if rdeg[i] is None:
                        rdeg[i] = want
                        queue.append(("r", i))
                    elif rdeg[i] != want:
                        raise GradingError(f"entry ({i},{idx}) = lambda^{k} is inconsistent with the grading")

    for i in range(m):
        if rdeg[i] is not None:
            visit("r", i)
    for j in range(n):
        if cdeg[j] is not None:
            visit("c", j)
    for j in range(n):
        if cdeg[j] is None:
            cdeg[j] = 0
            visit("c", j)
    for i in range(m):
        if rdeg[i] is None:
            rdeg[i] = 0
            visit("r", i)
    return rdeg, cdeg


@dataclass(frozen=True, order=True)
class Summand:
    """Cyclic summand generated in internal ``degree``.

    ``order`` is ``None`` for a free summand, else ``k`` for F2[lambda]/lambda^k.
    ``rep`` is a bitmask over the ambient generators; the lambda-power on each
    component is implied by the grading.
    """

    degree: int
    order: Optional[int]
    rep: int

    def dim_at(self, t: int) -> int:
        if t > self.degree:
            return 0
        if self.order is None:
            return 1
        return 1 if self.degree - t < self.order else 0


def _summand_key(s: Summand):
    return (-s.degree, s.order is None, s.order or 0, s.rep)


@dataclass(frozen=True)
class ModuleDecomposition:
    summands: Tuple[Summand, ...] = ()

    @classmethod
    def of(cls, summands) -> "ModuleDecomposition":
        return cls(tuple(sorted(summands, key=_summand_key)))

    @property
    def free_rank(self) -> int:
        return sum(1 for s in self.summands if s.order is None)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(sorted(s.order for s in self.summands if s.order is not None))

    def dim_at(self, t: int) -> int:
        return sum(s.dim_at(t) for s in self.summands)


@dataclass
class SmithResult:
    cokernel: ModuleDecomposition
    kernel: List[Tuple[int, int]] = field(default_factory=list)  # (degree, bitmask over rows)
    row_basis: List[int] = field(default_factory=list)
    pivot_rows: List[int] = field(default_factory=list)


def _smith(coeffs: np.ndarray, rdeg: Sequence[int], cdeg: Sequence[int], truncation: Optional[int] = None):
    """Graded Smith reduction.  Returns (pivots, row transform, column reps).

    ``pivots`` maps column -> (row, exponent).  Row ``i`` of the transform is
    the new source basis vector i in old coordinates; ``creps[j]`` the new
    target generator j in old coordinates.
    """
    C = coeffs.astype(np.uint8).copy()
    m, n = C.shape
    rdeg = np.asarray(rdeg, dtype=np.int64)
    cdeg = np.asarray(cdeg, dtype=np.int64)
    expo = cdeg[None, :] - rdeg[:, None] if m and n else np.zeros((m, n), dtype=np.int64)
    if truncation is not None and m and n:
        C[expo >= truncation] = 0
    qrows = [1 << i for i in range(m)]
    creps = [1 << j for j in range(n)]
    row_live = np.ones(m, dtype=bool)
    col_live = np.ones(n, dtype=bool)
    pivots = {}
    big = np.iinfo(np.int64).max
    while True:
        live = C.astype(bool) & row_live[:, None] & col_live[None, :]
        if not live.any():
            break
        cand = np.where(live, expo, big)
        kmin = cand.min()
        # first (row, col) in row-major order among minimal exponents
        p, j = map(int, np.argwhere(cand == kmin)[0])
        for i in np.flatnonzero(C[:, j]):
            if i != p:
                C[i] ^= C[p]
                qrows[i] ^= qrows[p]
        for l in np.flatnonzero(C[p]):
            if l != j:
                C[:, l] ^= C[:, j]
                creps[j] ^= creps[l]
        if truncation is not None:
            C[expo >= truncation] = 0
        pivots[j] = (p, int(kmin))
        row_live[p] = False
        col_live[j] = False
    return pivots, qrows, creps


def monomial_smith_form(m: MonomialMatrix, truncation: Optional[int] = None) -> SmithResult:
    """Cokernel decomposition and kernel basis of ``x -> x M``.

    With ``truncation=K`` the computation happens over F2[lambda]/lambda^K and
    summands surviving to the ceiling are reported as free.
    """
    pivots, qrows, creps = _smith(m.coeffs, m.row_deg, m.col_deg, truncation)
    summands = []
    for j, deg in enumerate(m.col_deg):
        if j in pivots:
            k = pivots[j][1]
            if k == 0:
                continue
            summands.append(Summand(deg, k, creps[j]))
        else:
            summands.append(Summand(deg, None, creps[j]))
    pivot_rows = sorted(p for p, _ in pivots.values())
    kernel = [(m.row_deg[i], qrows[i]) for i in range(len(m.row_deg)) if i not in set(pivot_rows)]
    return SmithResult(ModuleDecomposition.of(summands), kernel, qrows, pivot_rows)


def _matmul_gf2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    return (a.astype(np.int64) @ b.astype(np.int64) % 2).astype(np.uint8)


def module_homology(d_in: MonomialMatrix, d_out: MonomialMatrix) -> ModuleDecomposition:
    """Decompose ker(d_out) / im(d_in) for free modules C1 -> C2 -> C3.

    Representatives are bitmasks over the C2 generators.
    """
    if d_in.coeffs.shape[1] != d_out.coeffs.shape[0] or d_in.col_deg != d_out.row_deg:
        raise CompositionError("middle modules of d_in and d_out do not match")
    comp = _matmul_gf2(d_in.coeffs, d_out.coeffs)
    bad = np.flatnonzero(comp.any(axis=1))
    if bad.size:
        i = int(bad[0])
        name = d_in.row_names[i] if d_in.row_names else f"generator {i}"
        raise CompositionError(f"d_out . d_in is nonzero on {name}")
    sm = monomial_smith_form(d_out)
    kernel = sm.kernel
    kdeg = [deg for deg, _ in kernel]
    kvec = [vec for _, vec in kernel]
    nmid = len(d_out.row_deg)
    basis_vecs = sm.row_basis
    rows = []
    for i, t in enumerate(d_in.row_deg):
        y = 0
        for j in np.flatnonzero(d_in.coeffs[i]):
            y |= 1 << int(j)
        # express y in the transformed basis restricted to degrees >= t
        usable = [idx for idx in range(nmid) if d_out.row_deg[idx] >= t]
        sol = gf2.solve_combination(y, [basis_vecs[idx] for idx in usable], max(nmid, 1))
        if sol is None:
            raise CompositionError(f"image of generator {i} is not in the span of the middle basis")
        row = np.zeros(len(kernel), dtype=np.uint8)
        for pos, idx in enumerate(usable):
            if (sol >> pos) & 1:
                if idx in sm.pivot_rows:
                    raise CompositionError(f"image of generator {i} leaves the kernel of d_out")
                row[[k for k, (_, v) in enumerate(kernel) if v == basis_vecs[idx]][0]] = 1
        rows.append(row)
    pres = MonomialMatrix(
        np.array(rows, dtype=np.uint8).reshape(len(rows), len(kernel)),
        tuple(d_in.row_deg),
        tuple(kdeg),
    )
    coker = monomial_smith_form(pres).cokernel
    return ModuleDecomposition.of(
        Summand(s.degree, s.order, gf2.combine(s.rep, kvec)) for s in coker.summands
    )

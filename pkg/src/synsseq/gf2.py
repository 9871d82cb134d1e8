"""Bit-packed GF(2) matrices: row reduction, rank, kernels.

Vectors are also passed around as plain Python ints (bit ``i`` = coordinate
``i``); that is the form the page engine uses for per-bidegree subspaces.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import _kernels

WORD = _kernels.WORD
_MASK64 = (1 << 64) - 1


def _nwords(cols: int) -> int:
    return max(1, (cols + WORD - 1) // WORD)


def _int_to_words(v: int, nw: int) -> np.ndarray:
    out = np.zeros(nw, dtype=np.uint64)
    k = 0
    while v and k < nw:
        out[k] = v & _MASK64
        v >>= 64
        k += 1
    return out


def _words_to_int(words) -> int:
    v = 0
    for k in range(len(words) - 1, -1, -1):
        v = (v << 64) | int(words[k])
    return v


@dataclass(eq=False)
class BitMatrix:
    """Dense GF(2) matrix with rows packed into 64-bit words."""

    rows: int
    cols: int
    data: np.ndarray

    def __post_init__(self):
        if self.data.shape != (self.rows, _nwords(self.cols)):
            raise ValueError(f"storage shape {self.data.shape} does not match {self.rows}x{self.cols}")
        if self.data.dtype != np.uint64:
            raise ValueError("storage must be uint64")
        tail = self.cols % WORD
        if self.rows and tail and np.any(self.data[:, -1] >> np.uint64(tail)):
            raise ValueError("bits set beyond the last column")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, _nwords(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_int_rows([1 << i for i in range(n)], n)

    @classmethod
    def from_dense(cls, a) -> "BitMatrix":
        a = np.asarray(a, dtype=np.uint8) & 1
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows, cols = a.shape
        nw = _nwords(cols)
        padded = np.zeros((rows, nw * WORD), dtype=np.uint8)
        padded[:, :cols] = a
        weights = np.uint64(1) << np.arange(WORD, dtype=np.uint64)
        data = (padded.reshape(rows, nw, WORD).astype(np.uint64) * weights).sum(axis=2, dtype=np.uint64)
        return cls(rows, cols, data.astype(np.uint64))

    @classmethod
    def from_int_rows(cls, vectors: Sequence[int], cols: int) -> "BitMatrix":
        nw = _nwords(cols)
        data = np.zeros((len(vectors), nw), dtype=np.uint64)
        for i, v in enumerate(vectors):
            if v < 0 or v >> cols:
                raise ValueError(f"row {i} has bits beyond column {cols}")
            data[i] = _int_to_words(v, nw)
        return cls(len(vectors), cols, data)

    def to_dense(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        shifts = np.arange(WORD, dtype=np.uint64)
        bits = (self.data[:, :, None] >> shifts) & np.uint64(1)
        return bits.reshape(self.rows, -1)[:, : self.cols].astype(np.uint8)

    def int_rows(self) -> List[int]:
        return [_words_to_int(self.data[i]) for i in range(self.rows)]

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())

    def transpose(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T)

    def apply(self, v: int) -> int:
        """Matrix times column vector ``v`` (bitmask over columns)."""
        out = 0
        for i, row in enumerate(self.int_rows()):
            if bin(row & v).count("1") & 1:
                out |= 1 << i
        return out

    def __eq__(self, other):
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.data, other.data)
        )

    def __repr__(self):
        return f"BitMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True)
class RrefResult:
    matrix: BitMatrix
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(m: BitMatrix) -> RrefResult:
    """Reduced row echelon form over GF(2); zero rows are kept at the bottom."""
    data = m.data.copy()
    if m.rows == 0 or m.cols == 0:
        return RrefResult(BitMatrix(m.rows, m.cols, data), ())
    data, piv = _kernels.rref_inplace(data, m.cols)
    return RrefResult(BitMatrix(m.rows, m.cols, data), tuple(int(p) for p in piv))


def rank(m: BitMatrix) -> int:
    return rref(m).rank


def kernel_basis(m: BitMatrix) -> List[int]:
    """Basis of {v : M v = 0}, one bitmask per vector, ordered by free column."""
    red = rref(m)
    rows = red.matrix.int_rows()
    pivset = set(red.pivots)
    basis = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = 1 << free
        for i, pc in enumerate(red.pivots):
            if (rows[i] >> free) & 1:
                v |= 1 << pc
        basis.append(v)
    return basis


# -- subspace helpers on int bitmasks -----------------------------------------

_SMALL = 64  # below this width plain int elimination beats building a matrix


def _echelon_small(vectors: List[int]) -> List[int]:
    piv: dict = {}  # lowest set bit -> row
    for v in vectors:
        for p, row in piv.items():
            if (v >> p) & 1:
                v ^= row
        if not v:
            continue
        p = (v & -v).bit_length() - 1
        for q in piv:
            if (piv[q] >> p) & 1:
                piv[q] ^= v
        piv[p] = v
    return [piv[p] for p in sorted(piv)]


def span_basis(vectors: Iterable[int], ncols: int) -> List[int]:
    """Reduced echelon basis of the span (canonical for the subspace)."""
    vectors = [v for v in vectors if v]
    if not vectors:
        return []
    if ncols <= _SMALL:
        return _echelon_small(vectors)
    red = rref(BitMatrix.from_int_rows(vectors, ncols))
    return red.matrix.int_rows()[: red.rank]


def span_rank(vectors: Iterable[int], ncols: int) -> int:
    return len(span_basis(vectors, ncols))


def in_span(v: int, basis: Sequence[int], ncols: int) -> bool:
    if v == 0:
        return True
    for row in span_basis(basis, ncols):
        p = (row & -row).bit_length() - 1
        if (v >> p) & 1:
            v ^= row
    return v == 0


def solve_combination(v: int, vectors: Sequence[int], ncols: int):
    """Coefficient bitmask c with sum_i c_i vectors[i] = v, or None."""
    n = len(vectors)
    # columns of the system are the vectors plus v; kernel elements with the
    # v-coordinate set give a solution
    cols = [(vectors[i], i) for i in range(n)] + [(v, n)]
    rows = []
    for bit in range(ncols):
        row = 0
        for vec, j in cols:
            if (vec >> bit) & 1:
                row |= 1 << j
        rows.append(row)
    for k in kernel_basis(BitMatrix.from_int_rows(rows, n + 1)):
        if (k >> n) & 1:
            return k & ((1 << n) - 1)
    return None


def preimage_coefficients(images: Sequence[int], target_basis: Sequence[int], ncols: int) -> List[int]:
    """Basis of coefficient vectors c with sum c_i images[i] in span(target_basis)."""
    n = len(images)
    allv = list(images) + list(target_basis)
    if not allv:
        return []
    rows = []
    for bit in range(ncols):
        row = 0
        for j, vec in enumerate(allv):
            if (vec >> bit) & 1:
                row |= 1 << j
        rows.append(row)
    mask = (1 << n) - 1
    coeffs = [k & mask for k in kernel_basis(BitMatrix.from_int_rows(rows, len(allv)))]
    return span_basis(coeffs, max(n, 1))


def combine(coeff: int, vectors: Sequence[int]) -> int:
    out = 0
    i = 0
    while coeff:
        if coeff & 1:
            out ^= vectors[i]
        coeff >>= 1
        i += 1
    return out


def popcount(v: int) -> int:
    return bin(v).count("1")

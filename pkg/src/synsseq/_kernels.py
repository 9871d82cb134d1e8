"""Hot GF(2) kernels over bit-packed rows.

Rows are ``uint64`` arrays of shape ``(nrows, nwords)``; column ``c`` lives in
word ``c // 64`` at bit ``c % 64``.  Each kernel has a numba implementation and
a pure-numpy twin.  Setting ``SYNSSEQ_PURE_NUMPY=1`` (or running without numba)
selects the numpy path; both produce bit-identical output.
"""
import os

import numpy as np

WORD = 64

_FORCE_NUMPY = os.environ.get("SYNSSEQ_PURE_NUMPY", "").strip().lower() in ("1", "true", "yes")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and not _FORCE_NUMPY


def rref_numpy(rows, ncols):
    """In-place reduced row echelon form.  Returns (rows, pivot columns)."""
    m = rows.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        w, b = divmod(c, WORD)
        mask = np.uint64(1) << np.uint64(b)
        col = (rows[r:, w] & mask) != 0
        hits = np.flatnonzero(col)
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            tmp = rows[r].copy()
            rows[r] = rows[p]
            rows[p] = tmp
        sel = (rows[:, w] & mask) != 0
        sel[r] = False
        rows[sel] ^= rows[r]
        pivots.append(c)
        r += 1
    return rows, np.array(pivots, dtype=np.int64)


def _rref_numba_impl(rows, ncols):
    m = rows.shape[0]
    nw = rows.shape[1]
    pivots = np.empty(min(m, ncols), dtype=np.int64)
    npiv = 0
    r = 0
    one = np.uint64(1)
    for c in range(ncols):
        if r == m:
            break
        w = c // 64
        mask = one << np.uint64(c % 64)
        p = -1
        for i in range(r, m):
            if rows[i, w] & mask:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(nw):
                t = rows[r, k]
                rows[r, k] = rows[p, k]
                rows[p, k] = t
        for i in range(m):
            if i != r and (rows[i, w] & mask):
                for k in range(nw):
                    rows[i, k] ^= rows[r, k]
        pivots[npiv] = c
        npiv += 1
        r += 1
    return rows, pivots[:npiv]


if numba is not None:
    rref_numba = numba.njit(cache=True)(_rref_numba_impl)
else:  # pragma: no cover
    rref_numba = None


def rref_inplace(rows, ncols):
    if USE_NUMBA and rows.shape[0] > 0 and rows.shape[1] > 0:
        return rref_numba(rows, ncols)
    return rref_numpy(rows, ncols)


def backend():
    return "numba" if USE_NUMBA else "numpy"

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synsseq import _kernels, gf2
from synsseq.gf2 import BitMatrix


def brute_rank(dense):
    rows = [int("".join(map(str, r[::-1])), 2) if len(r) else 0 for r in dense]
    basis = []
    for v in rows:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def brute_kernel(dense):
    m, n = dense.shape
    return {v for v in range(1 << n)
            if all(sum((v >> j) & 1 for j in range(n) if dense[i, j]) % 2 == 0 for i in range(m))}


matrices = st.integers(0, 6).flatmap(
    lambda m: st.integers(0, 7).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=m, max_size=m).map(
            lambda rows: np.array(rows, dtype=np.uint8).reshape(m, n))))


@given(matrices)
@settings(max_examples=200, deadline=None)
def test_rank_and_kernel_match_brute_force(a):
    m = BitMatrix.from_dense(a)
    assert gf2.rank(m) == brute_rank(a)
    kb = gf2.kernel_basis(m)
    spanned = {0}
    for v in kb:
        spanned |= {x ^ v for x in spanned}
    assert spanned == brute_kernel(a)
    assert len(kb) == a.shape[1] - brute_rank(a)


@given(matrices)
@settings(max_examples=100, deadline=None)
def test_dense_round_trip(a):
    m = BitMatrix.from_dense(a)
    assert np.array_equal(m.to_dense(), a)
    assert BitMatrix.from_int_rows(m.int_rows(), a.shape[1]) == m
    assert m.transpose().transpose() == m


def test_rref_is_reduced():
    a = np.array([[1, 1, 0, 1], [1, 1, 1, 0], [0, 0, 1, 1]], dtype=np.uint8)
    red = gf2.rref(BitMatrix.from_dense(a))
    assert red.pivots == (0, 2)
    d = red.matrix.to_dense()
    for i, p in enumerate(red.pivots):
        assert d[:, p].sum() == 1 and d[i, p] == 1


def test_wide_matrices_cross_word_boundary():
    rng = np.random.default_rng(1)
    a = rng.integers(0, 2, size=(40, 150), dtype=np.uint8)
    assert gf2.rank(BitMatrix.from_dense(a)) == brute_rank(a)


def test_tail_bits_rejected():
    with pytest.raises(ValueError):
        BitMatrix(1, 3, np.array([[0b1000]], dtype=np.uint64))
    with pytest.raises(ValueError):
        BitMatrix.from_int_rows([0b1000], 3)


@pytest.mark.skipif(_kernels.numba is None, reason="numba not installed")
def test_numba_and_numpy_kernels_agree():
    rng = np.random.default_rng(7)
    for n in (1, 5, 63, 64, 65, 130):
        for m in (0, 1, 7, 40):
            nw = (n + 63) // 64
            data = rng.integers(0, 2**63, size=(m, nw), dtype=np.uint64)
            if n % 64:
                data[:, -1] &= np.uint64((1 << (n % 64)) - 1)
            r1, p1 = _kernels.rref_numpy(data.copy(), n)
            r2, p2 = _kernels.rref_numba(data.copy(), n)
            assert np.array_equal(r1, r2) and np.array_equal(p1, p2)


def test_subspace_helpers():
    vs = [0b011, 0b110, 0b101]
    assert gf2.span_rank(vs, 3) == 2
    assert gf2.in_span(0b101, vs[:2], 3)
    assert not gf2.in_span(0b001, vs, 3)
    c = gf2.solve_combination(0b101, vs[:2], 3)
    assert gf2.combine(c, vs[:2]) == 0b101
    assert gf2.solve_combination(0b001, vs, 3) is None
    for coeff in gf2.preimage_coefficients([0b01, 0b10, 0b11], [0b01], 2):
        assert gf2.in_span(gf2.combine(coeff, [0b01, 0b10, 0b11]), [0b01], 2)
    assert len(gf2.preimage_coefficients([0b01, 0b10, 0b11], [0b01], 2)) == 2


def test_exhaustive_small_spans():
    for vecs in itertools.product(range(8), repeat=2):
        basis = gf2.span_basis(vecs, 3)
        closure = {0}
        for v in vecs:
            closure |= {x ^ v for x in closure}
        assert len(closure) == 2 ** len(basis)


@given(st.lists(st.integers(0, 2**40 - 1), max_size=12))
@settings(max_examples=300, deadline=None)
def test_small_echelon_matches_matrix_rref(vecs):
    nz = [v for v in vecs if v]
    want = []
    if nz:
        red = gf2.rref(BitMatrix.from_int_rows(nz, 40))
        want = red.matrix.int_rows()[: red.rank]
    assert gf2.span_basis(vecs, 40) == want
    for v in vecs[:3]:
        assert gf2.in_span(v ^ 1, vecs, 40) == (gf2.span_rank(vecs + [v ^ 1], 40) == len(want))

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crndecomp.exactla import (
    BACKEND,
    RationalMatrix,
    kernel_basis,
    member,
    rank,
    span_rank,
    sum_is_direct,
)
from crndecomp.exactla import _backend, _pykernel
from oracles import minor_rank

small = st.integers(-4, 4)
fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def matrices(draw, elements=small, max_dim=5):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return [[draw(elements) for _ in range(c)] for _ in range(r)]


@settings(max_examples=150, deadline=None)
@given(matrices(fractions))
def test_rank_matches_minors(rows):
    assert rank(RationalMatrix(rows)) == minor_rank(rows)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_basis(rows):
    M = RationalMatrix(rows)
    basis = kernel_basis(M)
    assert len(basis) == M.shape[1] - rank(M)
    for v in basis:
        assert all(x == 0 for x in M.apply(v))
        assert all(Fraction(x).denominator == 1 for x in v)
    if basis:
        assert span_rank(basis, M.shape[1]) == len(basis)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_member_combination(rows, coefs):
    vecs = [r for r in rows]
    dim = len(vecs[0])
    combo = [sum(c * v[i] for c, v in zip(coefs, vecs)) for i in range(dim)]
    assert member(combo, vecs)


def test_member_rejects():
    assert not member([0, 0, 1], [[1, 0, 0], [0, 1, 0]])
    assert member([0, 0, 0], [])
    assert not member([1, 0], [])


def test_sum_is_direct():
    e1, e2 = [1, 0, 0], [0, 1, 0]
    assert sum_is_direct([[e1], [e2]])
    assert not sum_is_direct([[e1, e2], [[1, 1, 0]]])
    assert sum_is_direct([[e1], []], dim=3)


def test_float_entries_rejected():
    with pytest.raises(TypeError):
        RationalMatrix([[0.5, 1]])


def test_matrix_ops():
    A = RationalMatrix([[1, 2], [3, 4]])
    assert (A @ RationalMatrix.identity(2)) == A
    assert A.T.tolist() == [[1, 3], [2, 4]]
    assert A.column(1) == (2, 4)
    assert rank(A) == 2


@settings(max_examples=100, deadline=None)
@given(matrices(st.integers(-10**6, 10**6), max_dim=6))
def test_backends_agree(rows):
    ncols = len(rows[0])
    a = _pykernel.echelon([list(r) for r in rows], ncols)
    b = _backend.echelon([list(r) for r in rows], ncols)
    assert a[0] == b[0] and a[1] == b[1]


def test_overflow_falls_back():
    big = 2**40
    rows = [[big, big + 1, 3], [big - 7, big, 5], [11, big + 3, big]]
    expected = minor_rank(rows)
    assert _backend.echelon([r[:] for r in rows], 3)[0] == expected
    assert rank(RationalMatrix(rows)) == expected


def test_backend_name():
    assert BACKEND in ("cython", "python")


def test_compiled_kernel_signals_overflow():
    _ckernel = pytest.importorskip("crndecomp.exactla._ckernel", reason="compiled kernel not built")
    big = 2**62
    with pytest.raises(OverflowError):
        _ckernel.echelon([[big, 3], [5, big]], 2)

from fractions import Fraction
from random import Random

import numpy as np
from hypothesis import given, strategies as st

from cbkit.fields import GF, QQ
from cbkit.linalg import (ExactMatrix, bareiss_rank, determinant, gauss_rank, intersect_subspaces,
                          left_kernel_basis, left_kernel_numpy, nullspace_basis, rank, rref,
                          solve_in_span, span_dimension)

F5, F101 = GF(5), GF(101)


def test_rank_trivial(oracles):
    assert rank(ExactMatrix.identity(3, QQ)) == 3
    assert rank(ExactMatrix.zeros(2, 5, F101)) == 0
    vander = ExactMatrix([[1, t, t * t] for t in (1, 2, 3, 4)], F101)
    assert rank(vander) == oracles["ranks"]["vandermonde_4x3"] == 3


def test_nullspace_trivial():
    assert nullspace_basis(ExactMatrix.identity(4, F101)) == []
    (v,) = nullspace_basis(ExactMatrix([[1, 1]], F5))
    assert F5.dot([1, 1], v) == 0 and any(v)


def _matrix(draw_rows, field):
    return ExactMatrix(draw_rows, field)


rows_st = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 100), min_size=c, max_size=c), min_size=1, max_size=7))


@given(rows_st)
def test_nullspace_by_substitution(rows):
    M = ExactMatrix(rows, F101)
    ker = nullspace_basis(M)
    assert len(ker) == M.ncols - rank(M)
    for v in ker:
        assert all(x == 0 for x in M.matvec(v))
    assert span_dimension(ker, F101) == len(ker) if ker else True


@given(rows_st)
def test_left_kernel_routes_agree(rows):
    M = ExactMatrix(rows, F101)
    K1 = left_kernel_basis(M)
    K2 = left_kernel_numpy(np.array(rows, dtype=np.int64), 101)
    assert len(K1) == K2.shape[0] == M.nrows - rank(M)
    for k in K2.tolist():
        assert all(x == 0 for x in M.transpose().matvec(k))
    # same span
    if K1:
        assert span_dimension(K1 + K2.tolist(), F101) == len(K1)


@given(rows_st)
def test_rank_routes_agree(rows):
    M = ExactMatrix(rows, F101)
    assert rank(M) == gauss_rank(M) == len(rref(M)[1])


@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=1, max_size=5))
def test_bareiss_matches_rational_gauss(rows):
    assert bareiss_rank(rows) == gauss_rank(ExactMatrix([[Fraction(x) for x in r] for r in rows], QQ))


def test_determinant():
    M = ExactMatrix([[2, 1], [7, 4]], QQ)
    assert determinant(M) == 1


def test_span_helpers():
    basis = [[1, 0, 0], [0, 1, 0]]
    assert solve_in_span(basis, [3, 4, 0], F101) == [3, 4]
    assert solve_in_span(basis, [0, 0, 1], F101) is None
    inter = intersect_subspaces([[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]], F101)
    assert span_dimension(inter, F101) == 1

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import invariant_factors_by_minors, matmul, perm_det
from torickit.exactla import (
    IntMatrix,
    cokernel_invariants,
    det,
    hermite_rows,
    invariant_factors,
    kernel_basis,
    primitive,
    rank,
    saturate,
    smith_normal_form,
    solve_rational,
)

matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m
        )
    )
)


def test_identity_snf():
    snf = smith_normal_form(IntMatrix.identity(3))
    assert snf.D == IntMatrix.identity(3)
    assert snf.invariant_factors == [1, 1, 1]


def test_snf_2x2_example():
    # gcd of entries = 2, |det| = 8
    assert invariant_factors([[2, 4], [6, 8]]) == [2, 4]


def test_zero_matrix():
    snf = smith_normal_form(IntMatrix.zeros(2, 3))
    assert snf.rank == 0
    assert snf.D == IntMatrix.zeros(2, 3)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_properties(rows):
    A = IntMatrix(rows)
    snf = smith_normal_form(A)
    assert (snf.U @ A @ snf.V) == snf.D
    assert abs(perm_det(snf.U.tolist())) == 1
    assert abs(perm_det(snf.V.tolist())) == 1
    assert snf.D.is_diagonal()
    diag = snf.diagonal
    r = snf.rank
    assert all(d > 0 for d in diag[:r]) and all(d == 0 for d in diag[r:])
    for a, b in zip(diag[: r - 1], diag[1:r]):
        assert b % a == 0
    assert snf.invariant_factors == invariant_factors_by_minors(rows)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_kernel_rank_nullity(rows):
    A = IntMatrix(rows)
    K = kernel_basis(A)
    assert rank(A) + len(K) == A.ncols
    for v in K:
        assert not any(A.apply(v))
    if K:
        # saturated: the basis matrix has all invariant factors 1
        assert invariant_factors(K) == [1] * len(K)


def test_kernel_examples():
    assert kernel_basis(IntMatrix.identity(3)) == []
    assert kernel_basis([[1, 0, -1], [0, 1, -1]]) == [(1, 1, 1)]
    for a in range(4):
        assert kernel_basis([[1, 0, -1, 0], [0, 1, a, -1]]) == [(1, 0, 1, a), (0, 1, 0, 1)]


def test_cokernel_examples():
    assert cokernel_invariants(IntMatrix.identity(3)) == (0, [])
    assert cokernel_invariants([[2]]) == (0, [2])
    p2 = IntMatrix([[1, 0, -1], [0, 1, -1]]).T
    assert cokernel_invariants(p2) == (1, [])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)
))
def test_det_matches_permutation_expansion(rows):
    assert det(rows) == perm_det(rows)


def test_hermite_is_canonical():
    a = hermite_rows([[0, 0, -2, -2], [-1, -1, 3, 3]])
    b = hermite_rows([[1, 1, 1, 1], [0, 0, 2, 2]])
    assert a == b == [(1, 1, 1, 1), (0, 0, 2, 2)]


def test_saturate():
    assert hermite_rows(saturate([[2, 0], [0, 2]])) == [(1, 0), (0, 1)]
    assert hermite_rows(saturate([[2, 4, 6]])) == [(1, 2, 3)]


def test_solve_and_primitive():
    assert solve_rational([(1, 0), (1, 2)], (1, 1)) == [Fraction(1, 2), Fraction(1, 2)]
    assert solve_rational([(1, 0)], (0, 1)) is None
    assert primitive([Fraction(1, 2), Fraction(-3, 4)]) == (2, -3)
    with pytest.raises(ValueError):
        primitive([0, 0])


def test_matmul_consistency():
    A = IntMatrix([[1, 2], [3, 4], [5, 6]])
    B = IntMatrix([[1, -1, 0], [2, 0, 1]])
    assert (A @ B).tolist() == matmul(A.tolist(), B.tolist())

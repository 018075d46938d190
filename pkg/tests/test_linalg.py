from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from gvlat.linalg import det, diagonal, int_inverse, inverse, matmul, nullspace, rank, smith_normal_form, solve_left

small_int = st.integers(min_value=-6, max_value=6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_int, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_smith_form_factorises(A):
    U, D, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    d = diagonal(D)
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3))
def test_smith_invariants_match_sympy(A):
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    ours = sorted(abs(x) for x in diagonal(smith_normal_form(A)[1]) if x)
    ref = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
    theirs = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)) if ref[i, i] != 0)
    assert ours == theirs


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(small_int, min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_and_inverse_match_sympy(A):
    M = sympy.Matrix(A)
    assert det(A) == Fraction(int(M.det()))
    if M.det() != 0:
        inv = inverse(A)
        ref = M.inv()
        assert all(inv[i][j] == Fraction(int(ref[i, j].p), int(ref[i, j].q)) for i in range(3) for j in range(3))


def test_int_inverse_unimodular():
    U = [[2, 1], [1, 1]]
    assert matmul(U, int_inverse(U)) == [[1, 0], [0, 1]]


def test_nullspace_and_rank():
    A = [[1, 2, 3], [2, 4, 6]]
    ns = nullspace(A, 3)
    assert rank(A) == 1 and len(ns) == 2
    for v in ns:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)


def test_solve_left():
    B = [[1, 0], [1, 1]]
    assert solve_left(B, (3, 2)) == (1, 2)
    assert solve_left([[1, 0]], (0, 1)) is None

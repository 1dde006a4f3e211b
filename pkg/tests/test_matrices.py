"""Dense exact linear algebra: rank, nullspace, inverse, inertia."""

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from paircanon import (
    ExactMatrix,
    GaussianRational,
    completion_basis,
    gq,
    hermitian_inertia,
    rref_rank_nullspace,
)
from paircanon.errors import ShapeMismatch, Singular
from paircanon.exactmat import hermitian_diagonalize

from conftest import rand_matrix, rand_nonsingular

rationals = st.builds(
    mpq,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=4),
)
scalars = st.builds(GaussianRational, rationals, rationals)


def matrices(max_n=4):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: st.integers(min_value=1, max_value=max_n).flatmap(
            lambda m: st.lists(
                st.lists(scalars, min_size=m, max_size=m),
                min_size=n, max_size=n,
            ).map(ExactMatrix)
        )
    )


def test_empty_shapes():
    z = ExactMatrix.zeros(0, 3)
    assert z.shape == (0, 3)
    assert z.rank() == 0
    assert z.nullspace().shape == (3, 3)
    assert (z @ ExactMatrix.zeros(3, 0)).shape == (0, 0)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        ExactMatrix.identity(2) @ ExactMatrix.identity(3)
    with pytest.raises(ShapeMismatch):
        ExactMatrix.identity(2) + ExactMatrix.zeros(2, 3)


@given(matrices())
def test_rref_consistency(M):
    R, rank, ns = rref_rank_nullspace(M)
    assert rank <= min(M.rows, M.cols)
    assert ns.shape == (M.cols, M.cols - rank)
    if ns.cols:
        assert (M @ ns).is_zero()
    assert ns.rank() == ns.cols


@given(matrices())
def test_rank_of_transpose(M):
    assert M.rank() == M.transpose().rank()
    assert M.rank() == M.conj_transpose().rank()


def test_inverse_round_trip(rng):
    for _ in range(20):
        n = rng.randint(1, 5)
        M = rand_nonsingular(rng, n)
        assert M @ M.inv() == ExactMatrix.identity(n)
        assert M.inv() @ M == ExactMatrix.identity(n)


def test_singular_inverse_refused(rng):
    M = ExactMatrix.diag([gq(1), gq(0)])
    with pytest.raises(Singular):
        M.inv()


def test_det_multiplicative(rng):
    for _ in range(15):
        n = rng.randint(1, 4)
        A = rand_matrix(rng, n, n)
        B = rand_matrix(rng, n, n)
        assert (A @ B).det() == A.det() * B.det()


def test_charpoly_cayley_hamilton(rng):
    for _ in range(10):
        n = rng.randint(1, 4)
        A = rand_matrix(rng, n, n)
        coeffs = A.charpoly()
        acc = ExactMatrix.zeros(n, n)
        for c in coeffs:
            acc = acc @ A + ExactMatrix.identity(n).scale(c)
        assert acc.is_zero()


def test_solve_general(rng):
    for _ in range(10):
        n = rng.randint(1, 4)
        A = rand_matrix(rng, n, n)
        x = rand_matrix(rng, n, 1)
        b = A @ x
        sol = A.solve_general(b)
        assert sol is not None
        assert A @ sol == b


def test_hermitian_inertia_sylvester(rng):
    for _ in range(15):
        n = rng.randint(1, 4)
        signs = [rng.choice([1, -1, 0]) for _ in range(n)]
        D = ExactMatrix.diag([gq(s) for s in signs])
        S = rand_nonsingular(rng, n)
        A = S.conj_transpose() @ D @ S
        npl, nmi, nz = hermitian_inertia(A)
        assert npl == sum(1 for s in signs if s > 0)
        assert nmi == sum(1 for s in signs if s < 0)
        assert nz == sum(1 for s in signs if s == 0)


def test_hermitian_diagonalize(rng):
    for _ in range(15):
        n = rng.randint(1, 4)
        A = rand_matrix(rng, n, n)
        H = A + A.conj_transpose()
        W, D = hermitian_diagonalize(H)
        assert W.is_nonsingular()
        assert W.conj_transpose() @ H @ W == D
        for i in range(n):
            for j in range(n):
                if i != j:
                    assert D[i, j].is_zero()
                else:
                    assert D[i, i].is_real()


def test_completion_basis(rng):
    for _ in range(10):
        n = rng.randint(2, 5)
        k = rng.randint(1, n - 1)
        while True:
            Y1 = rand_matrix(rng, n, k)
            P = rand_matrix(rng, k, n)
            if (P @ Y1).is_nonsingular():
                break
        Y = completion_basis(Y1, P)
        full = Y1.hstack(Y)
        assert full.shape == (n, n)
        assert full.is_nonsingular()


def test_adj_kinds():
    M = ExactMatrix([[gq(1, 2), gq(3)], [gq(0, -1), gq(5, 5)]])
    assert M.adj("T") == M.transpose()
    assert M.adj("Star") == M.conj_transpose()

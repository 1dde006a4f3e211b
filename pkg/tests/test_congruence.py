"""Single-matrix congruence canonical structure recovery."""

import random

import pytest

from paircanon import (
    CongruenceStructure,
    EXACT,
    ExactMatrix,
    cosquare_jordan,
    gq,
    normalize_structure,
    realize_structure,
    star_congruence_structure,
    t_congruence_structure,
    type0_split,
)
from paircanon.errors import EigenFailure

from conftest import rand_nonsingular


def scramble(rng, A, kind, bound=2):
    S = rand_nonsingular(rng, A.rows, bound)
    return S.adj(kind) @ A @ S


def test_type0_split_counts(rng):
    s = CongruenceStructure(kind="T", type0=(3, 1), typeI=(2,))
    A = realize_structure(s)
    for _ in range(5):
        B = scramble(rng, A, "T")
        sizes, core = type0_split(B, "T")
        assert sorted(sizes, reverse=True) == [3, 1]
        assert core.rows == 2
        assert core.is_nonsingular()


def test_cosquare_jordan_weyr(rng):
    # Gamma_3: single eigenvalue 1, one Jordan block of size 3
    A = ExactMatrix.block_diag(
        [realize_structure(CongruenceStructure(kind="T", typeI=(3,)))]
    )
    rep = cosquare_jordan(A, "T", EXACT)
    assert len(rep.eigenvalues) == 1
    lam, exact, weyr = rep.eigenvalues[0]
    assert exact and lam == gq(1)
    assert tuple(weyr) == (1, 1, 1)


@pytest.mark.parametrize("kind", ["T", "Star"])
def test_plant_and_recover_congruence(kind, rng):
    if kind == "T":
        structures = [
            CongruenceStructure(kind="T", typeI=(1, 1)),
            CongruenceStructure(kind="T", type0=(2,), typeI=(2,)),
            CongruenceStructure(kind="T", typeII=((1, gq(2)),)),
            CongruenceStructure(
                kind="T", type0=(1,), typeI=(1,), typeII=((1, gq(0, 1)),)
            ),
            CongruenceStructure(kind="T", typeII=((2, gq(3)),)),
        ]
    else:
        structures = [
            CongruenceStructure(kind="Star", typeI=((1, gq(1)), (1, gq(-1)))),
            CongruenceStructure(kind="Star", type0=(2,), typeI=((2, gq(0, 1)),)),
            CongruenceStructure(kind="Star", typeII=((1, gq(2)),)),
            CongruenceStructure(
                kind="Star", type0=(1,), typeI=((1, gq(0, -1)),),
                typeII=((1, gq(0, 3)),),
            ),
        ]
    recover = t_congruence_structure if kind == "T" else star_congruence_structure
    for s in structures:
        s = normalize_structure(s)
        A = realize_structure(s)
        for _ in range(4):
            B = scramble(rng, A, kind)
            assert recover(B, EXACT) == s


def test_star_sign_characteristic_distinguishes(rng):
    # Delta_1 and -Delta_1 are not *-congruent
    plus = realize_structure(
        CongruenceStructure(kind="Star", typeI=((1, gq(1)),))
    )
    minus = realize_structure(
        CongruenceStructure(kind="Star", typeI=((1, gq(-1)),))
    )
    s_plus = star_congruence_structure(scramble(rng, plus, "Star"), EXACT)
    s_minus = star_congruence_structure(scramble(rng, minus, "Star"), EXACT)
    assert s_plus != s_minus


def test_t_mu_normalization_collapses_reciprocals():
    # H_2(mu) and H_2(1/mu) are the same T orbit
    a = realize_structure(
        CongruenceStructure(kind="T", typeII=((1, gq(2)),))
    )
    b = realize_structure(
        CongruenceStructure(kind="T", typeII=((1, gq(1) / gq(2)),))
    )
    assert t_congruence_structure(a, EXACT) == t_congruence_structure(b, EXACT)


def test_exact_backend_refuses_irrational_spectrum():
    # cosquare eigenvalues golden-ratio-like: A = [[1,1],[0,1]] symmetric part?
    # use a matrix whose cosquare has irrational eigenvalues
    A = ExactMatrix([[1, 2], [3, 1]])
    C = A.transpose().inv() @ A
    # eigenvalues of C are irrational here; EXACT must refuse
    with pytest.raises(EigenFailure):
        t_congruence_structure(A, EXACT)


def test_float_backend_reports_irrational_spectrum():
    # structure classification needs exact eigenvalues, but the float
    # fallback still reports the Jordan data of the cosquare
    A = ExactMatrix([[1, 2], [3, 1]])
    rep = cosquare_jordan(A, "T")  # DEFAULT backend falls back to float
    assert rep.total_size() == 2
    assert all(not exact for _, exact, _ in rep.eigenvalues)
    with pytest.raises(EigenFailure):
        t_congruence_structure(A)

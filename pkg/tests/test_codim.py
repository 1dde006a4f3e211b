"""Codimension formulas against the brute-force oracle."""

import pytest

from paircanon import (
    CodimBreakdown,
    CongruenceStructure,
    ExactMatrix,
    PairCanonicalStructure,
    build_block,
    codim_congruence,
    codim_pair,
    gq,
    interaction_formula,
    interaction_nullity,
    nullity_congruence_system,
    nullity_pair_system,
    realize_structure,
)
from paircanon.errors import BadStructure


def test_breakdown_total_consistency():
    with pytest.raises(BadStructure):
        CodimBreakdown(
            c0=1, c1=0, c2=0, c00=0, c11=0, c22=0, c01=0, c02=0, c12=0,
            total=5, kind="CongT", formula_profile="AsPrinted",
        )


def test_worked_example_breakdown():
    s = CongruenceStructure(
        kind="T", type0=(2,), typeI=(2,), typeII=((1, gq(2)),)
    )
    ps = PairCanonicalStructure(pivot="ENonsingular", structure=s)
    b = codim_pair(ps)
    assert b.total == 3
    assert b.c0 == 1 and b.c1 == 1 and b.c2 == 1
    assert b.c01 == b.c02 == b.c12 == 0

    reg = CongruenceStructure(kind="T", typeI=(2,), typeII=((1, gq(2)),))
    assert codim_congruence(reg).total == 2
    nil = CongruenceStructure(kind="T", type0=(2,))
    assert codim_congruence(nil).total == 1


def test_pivot_does_not_change_codim():
    s = CongruenceStructure(kind="Star", type0=(1,), typeI=((1, gq(1)),))
    for profile in ("AsPrinted", "Reconciled"):
        b1 = codim_pair(
            PairCanonicalStructure(pivot="ENonsingular", structure=s), profile
        )
        b2 = codim_pair(
            PairCanonicalStructure(pivot="QNonsingular", structure=s), profile
        )
        assert b1 == b2


@pytest.mark.parametrize(
    "s",
    [
        CongruenceStructure(kind="T", typeI=(1,)),
        CongruenceStructure(kind="T", typeI=(2, 1)),
        CongruenceStructure(kind="T", type0=(2, 1)),
        CongruenceStructure(kind="T", typeII=((1, gq(2)), (1, gq(2)))),
        CongruenceStructure(kind="T", typeII=((1, gq(2)), (1, gq(3)))),
        CongruenceStructure(kind="T", type0=(1,), typeI=(2,)),
    ],
)
def test_t_formula_matches_oracle(s):
    A = realize_structure(s)
    assert codim_congruence(s).total == nullity_congruence_system(A, "T").complex_dim
    for pivot in ("ENonsingular", "QNonsingular"):
        ps = PairCanonicalStructure(pivot=pivot, structure=s)
        E, Q = realize_structure(ps)
        assert codim_pair(ps).total == nullity_pair_system(E, Q, "T").complex_dim


@pytest.mark.parametrize(
    "s",
    [
        CongruenceStructure(kind="Star", typeI=((1, gq(1)),)),
        CongruenceStructure(kind="Star", typeI=((1, gq(1)), (1, gq(-1)))),
        CongruenceStructure(kind="Star", type0=(2,)),
        CongruenceStructure(kind="Star", typeII=((1, gq(2)),)),
        CongruenceStructure(
            kind="Star", typeI=((2, gq(0, 1)),), type0=(1,)
        ),
    ],
)
def test_star_reconciled_matches_oracle(s):
    A = realize_structure(s)
    assert (
        codim_congruence(s, "Reconciled").total
        == nullity_congruence_system(A, "Star").real_dim
    )
    for pivot in ("ENonsingular", "QNonsingular"):
        ps = PairCanonicalStructure(pivot=pivot, structure=s)
        E, Q = realize_structure(ps)
        assert (
            codim_pair(ps, "Reconciled").total
            == nullity_pair_system(E, Q, "Star").real_dim
        )


def test_star_as_printed_known_discrepancy():
    # I_2 = Delta_1 + Delta_1: the printed pairwise term undercounts
    s = CongruenceStructure(kind="Star", typeI=((1, gq(1)), (1, gq(1))))
    printed = codim_congruence(s, "AsPrinted").total
    reconciled = codim_congruence(s, "Reconciled").total
    oracle = nullity_congruence_system(realize_structure(s), "Star").real_dim
    assert printed == 3
    assert reconciled == oracle == 4


def test_interaction_formula_matches_oracle():
    cases = [
        (("H", 1, gq(2)), ("Gamma", 2), build_block("H", 1, gq(2)),
         build_block("Gamma", 2), "T"),
        (("J", 1, None), ("J", 2, None), build_block("J", 1, gq(0)),
         build_block("J", 2, gq(0)), "T"),
        (("Gamma", 1, None), ("Gamma", 3, None), build_block("Gamma", 1),
         build_block("Gamma", 3), "T"),
    ]
    for da, db, A, B, kind in cases:
        got = interaction_formula(da, db, kind)
        oracle = interaction_nullity(A, B, kind).complex_dim
        assert got == oracle

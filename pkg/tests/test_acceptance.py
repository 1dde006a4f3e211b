"""End-to-end acceptance gate.

Each test here pins one headline guarantee of the toolkit: the worked
6x6 example, exhaustive formula-oracle agreement, the printed-formula
discrepancy report, plant-and-recover fuzzing, witness soundness,
nilpotent count identities, nullity invariance, and the Lagrangian
clause.
"""

import random
import time

import numpy as np
import pytest
from gmpy2 import mpq

from paircanon import (
    EXACT,
    CongruenceStructure,
    ExactMatrix,
    FuzzConfig,
    GaussianRational,
    PairCanonicalStructure,
    build_block,
    codim_congruence,
    codim_pair,
    enumerate_structures,
    gq,
    interaction_nullity,
    is_lagrangian,
    nilpotent_pair_counts,
    nilpotent_pair_reduce,
    nullity_congruence_system,
    nullity_pair_system,
    realize_structure,
    run_fuzz,
    structured_pair_canonical,
)
from paircanon.fuzz import (
    random_elementary_product,
    random_unit_elementary_product,
)
from paircanon.pairs import _nilpotent_layout
from paircanon.serialize import structure_to_json

T_MUS = (gq(2), gq(3), gq(-1), gq(0, 1))
STAR_MUS = (gq(2), gq(0, 3))
STAR_ALPHAS = (gq(1), gq(-1), gq(0, 1), gq(0, -1))


def test_worked_example_6x6():
    """The 6x6 pair (I_4 + J_2(0)^T, H_2(2) + Gamma_2 + I_2): codimension
    3, matching the oracle, with regular and nilpotent congruence parts
    contributing 2 and 1 and zero interaction."""
    t0 = time.time()
    E = ExactMatrix.block_diag(
        [ExactMatrix.identity(4), build_block("J", 2, gq(0)).transpose()]
    )
    Q = ExactMatrix.block_diag(
        [
            build_block("H", 1, gq(2)),
            build_block("Gamma", 2),
            ExactMatrix.identity(2),
        ]
    )
    s = CongruenceStructure(
        kind="T", type0=(2,), typeI=(2,), typeII=((1, gq(2)),)
    )
    ps = PairCanonicalStructure(pivot="ENonsingular", structure=s)
    assert codim_pair(ps).total == 3
    assert nullity_pair_system(E, Q, "T").complex_dim == 3
    assert codim_congruence(
        CongruenceStructure(kind="T", typeI=(2,), typeII=((1, gq(2)),))
    ).total == 2
    assert codim_congruence(
        CongruenceStructure(kind="T", type0=(2,))
    ).total == 1
    regular = ExactMatrix.block_diag(
        [build_block("H", 1, gq(2)), build_block("Gamma", 2)]
    )
    nilpotent = build_block("J", 2, gq(0))
    assert interaction_nullity(regular, nilpotent, "T").complex_dim == 0
    assert time.time() - t0 < 1.0


def test_t_kind_formula_oracle_equality_exhaustive():
    """Every T congruence structure of size <= 5 with mu in {2,3,-1,i}:
    the printed formulas equal the oracle nullities, for the congruence
    orbit and for the pair orbit on both pivots."""
    t0 = time.time()
    structures = enumerate_structures("T", 5, t_mus=T_MUS)
    assert len(structures) > 100
    for s in structures:
        A = realize_structure(s)
        assert (
            codim_congruence(s, "AsPrinted").total
            == nullity_congruence_system(A, "T").complex_dim
        ), s
        for pivot in ("ENonsingular", "QNonsingular"):
            ps = PairCanonicalStructure(pivot=pivot, structure=s)
            E, Q = realize_structure(ps)
            assert (
                codim_pair(ps, "AsPrinted").total
                == nullity_pair_system(E, Q, "T").complex_dim
            ), (s, pivot)
    assert time.time() - t0 < 120


def test_star_kind_reconciled_equality_and_discrepancy_report():
    """Every Star structure of size <= 4 with alpha in {1,-1,i,-i} and mu
    in {2,3i}: the Reconciled profile equals the oracle everywhere, and
    the AsPrinted discrepancy report enumerates each mismatch, including
    I_2 = Delta_1 + Delta_1 (printed 3 vs oracle 4, real dimensions)."""
    t0 = time.time()
    structures = enumerate_structures(
        "Star", 4, star_mus=STAR_MUS, star_alphas=STAR_ALPHAS
    )
    assert len(structures) > 200
    report = []
    for s in structures:
        A = realize_structure(s)
        oracle = nullity_congruence_system(A, "Star").real_dim
        assert codim_congruence(s, "Reconciled").total == oracle, s
        printed = codim_congruence(s, "AsPrinted").total
        if printed != oracle:
            report.append(
                {
                    "structure": structure_to_json(s),
                    "printed": printed,
                    "oracle": oracle,
                }
            )
        for pivot in ("ENonsingular", "QNonsingular"):
            ps = PairCanonicalStructure(pivot=pivot, structure=s)
            E, Q = realize_structure(ps)
            assert (
                codim_pair(ps, "Reconciled").total
                == nullity_pair_system(E, Q, "Star").real_dim
            ), (s, pivot)
    # the report enumerates every mismatching structure exactly once
    import json

    assert len(report) == len(
        {json.dumps(e["structure"], sort_keys=True) for e in report}
    )
    i2 = structure_to_json(
        CongruenceStructure(kind="Star", typeI=((1, gq(1)), (1, gq(1))))
    )
    entry = [e for e in report if e["structure"] == i2]
    assert entry and entry[0]["printed"] == 3 and entry[0]["oracle"] == 4
    assert time.time() - t0 < 120


@pytest.mark.parametrize("kind", ["T", "Star"])
def test_plant_and_recover_fuzz_200_trials(kind):
    """200 seeded trials per kind, dimension <= 6, exact scrambles: the
    planted canonical structure is recovered exactly every time."""
    t0 = time.time()
    report = run_fuzz(
        FuzzConfig(seed=42, trials=200, max_dim=6, kind=kind)
    )
    assert report.mismatches == ()
    assert time.time() - t0 < 180


def test_witness_soundness_structured_pairs():
    """100 seeded structured pairs (25 per flavor, singular allowed,
    dimension <= 6): the returned witness maps the input pair to the
    canonical pair with exact entry equality."""
    flavors = [
        ("HermStar", "Star"),
        ("SkewHermStar", "Star"),
        ("SymT", "T"),
        ("SkewSymT", "T"),
    ]
    for flavor, kind in flavors:
        report = run_fuzz(
            FuzzConfig(seed=3, trials=25, max_dim=6, kind=kind, flavor=flavor)
        )
        assert report.mismatches == (), flavor
        assert report.witness_failures == (), flavor
        # witness_exact True means the witness reproduced the canonical
        # pair exactly; None would mean no witness was produced
        assert all(r.witness_exact is True for r in report.records), flavor


def test_witness_soundness_float_unitary():
    """Float mode returns a numerically unitary column transform:
    max-norm deviation of V^* V from the identity at most 1e-10."""
    rng = random.Random(77)
    pyth = [(mpq(3, 5), mpq(4, 5)), (mpq(5, 13), mpq(12, 13)),
            (mpq(8, 17), mpq(15, 17))]
    units = [gq(1), gq(-1), gq(0, 1), gq(0, -1)]

    def rand_exact_unitary(n):
        M = ExactMatrix.identity(n)
        for _ in range(2 * n):
            if n >= 2 and rng.random() < 0.7:
                i, j = rng.sample(range(n), 2)
                cth, sth = rng.choice(pyth)
                T = ExactMatrix.identity(n).rows_list()
                T[i][i] = gq(cth)
                T[j][j] = gq(cth)
                T[i][j] = gq(sth)
                T[j][i] = gq(-sth)
                M = M @ ExactMatrix(T)
            else:
                i = rng.randrange(n)
                T = ExactMatrix.identity(n).rows_list()
                T[i][i] = rng.choice(units)
                M = M @ ExactMatrix(T)
        return M

    for kind in ("T", "Star"):
        for _ in range(25):
            n = rng.randint(1, 6)
            a = rng.randint(0, n)
            b = rng.randint(0, n - a)
            rest = n - a - b
            d = rng.randint(0, rest // 2)
            c = rest - 2 * d
            E0, Q0 = _nilpotent_layout(a, b, c, d)
            U = random_elementary_product(rng, n, 3)
            V = rand_exact_unitary(n)
            E = U @ E0 @ V
            Q = U.inv().adj(kind) @ Q0 @ V
            w, (Ec, Qc) = nilpotent_pair_reduce(
                E, Q, mode="FloatUnitaryV", kind=kind
            )
            assert (Ec, Qc) == (E0, Q0)
            Vf = np.array(
                [[x.to_complex() for x in row] for row in w.V.rows_list()]
            )
            assert np.max(np.abs(Vf.conj().T @ Vf - np.eye(n))) <= 1e-10


def test_nilpotent_count_identities_500_pairs():
    """500 zero-product pairs built by construction: the rank-formula
    counts satisfy a+b+c+2d = n, rank E = a+d, rank Q = b+d, and
    d > 0 iff Q E^* is nonzero."""
    t0 = time.time()
    rng = random.Random(6006)
    for _ in range(500):
        n = rng.randint(1, 6)
        a0 = rng.randint(0, n)
        b0 = rng.randint(0, n - a0)
        rest = n - a0 - b0
        d0 = rng.randint(0, rest // 2)
        c0 = rest - 2 * d0
        E0, Q0 = _nilpotent_layout(a0, b0, c0, d0)
        U = random_elementary_product(rng, n, 3)
        V = random_elementary_product(rng, n, 3)
        E = U @ E0 @ V
        Q = U.inv().conj_transpose() @ Q0 @ V
        assert (E.conj_transpose() @ Q).is_zero()
        a, b, c, d = nilpotent_pair_counts(E, Q, "Star")
        assert min(a, b, c, d) >= 0
        assert a + b + c + 2 * d == n
        assert E.rank() == a + d
        assert Q.rank() == b + d
        assert (d > 0) == (not (Q @ E.conj_transpose()).is_zero())
    assert time.time() - t0 < 30


def test_pair_nullity_invariant_under_equivalence():
    """20 fixtures x 50 random equivalences: the pair-system nullity
    never moves."""
    rng = random.Random(1717)
    fixtures = []
    while len(fixtures) < 20:
        n = rng.randint(2, 3)
        kind = rng.choice(["T", "Star"])
        E = ExactMatrix(
            [
                [
                    gq(mpq(rng.randint(-2, 2)), mpq(rng.randint(-2, 2)))
                    for _ in range(n)
                ]
                for _ in range(n)
            ]
        )
        Q = ExactMatrix(
            [
                [
                    gq(mpq(rng.randint(-2, 2)), mpq(rng.randint(-2, 2)))
                    for _ in range(n)
                ]
                for _ in range(n)
            ]
        )
        fixtures.append((E, Q, kind))
    for E, Q, kind in fixtures:
        base = nullity_pair_system(E, Q, kind).real_dim
        n = E.rows
        for _ in range(50):
            U = random_elementary_product(rng, n, 2)
            V = random_elementary_product(rng, n, 2)
            E2 = U @ E @ V
            Q2 = U.inv().adj(kind) @ Q @ V
            assert nullity_pair_system(E2, Q2, kind).real_dim == base


@pytest.mark.parametrize("kind", ["T", "Star"])
def test_lagrangian_pairs_have_no_coupled_or_zero_blocks(kind):
    """25 seeded pairs per kind spanning Lagrangian subspaces: their
    canonical forms contain only (1,0), (0,1) and regular blocks, never
    (0,0) columns or coupled 2x2 nilpotent blocks."""
    rng = random.Random(4040 if kind == "T" else 4041)
    for _ in range(25):
        n = rng.randint(1, 5)
        r = rng.randint(0, n)
        A = ExactMatrix(
            [
                [
                    gq(mpq(rng.randint(-2, 2)), mpq(rng.randint(-2, 2)))
                    for _ in range(r)
                ]
                for _ in range(r)
            ]
        )
        S = A + A.adj(kind)  # symmetric (T) or Hermitian (Star)
        E0 = ExactMatrix.block_diag(
            [ExactMatrix.identity(r), ExactMatrix.zeros(n - r, n - r)]
        )
        Q0 = ExactMatrix.block_diag([S, ExactMatrix.identity(n - r)])
        assert is_lagrangian(E0, Q0, kind)
        U = random_unit_elementary_product(rng, n)
        V = random_unit_elementary_product(rng, n)
        E = U @ E0 @ V
        Q = U.inv().adj(kind) @ Q0 @ V
        assert is_lagrangian(E, Q, kind)
        form, _ = structured_pair_canonical(E, Q, kind)
        assert form.c == 0
        assert form.d == 0

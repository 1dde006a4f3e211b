"""Canonical forms of matrix pairs (E, Q) under T- and *-equivalence.

The group action is (E, Q) -> (U E V, U^{-T} Q V) for kind "T" and
(E, Q) -> (U E V, U^{-*} Q V) for kind "Star", with U, V nonsingular.
Throughout, the "product" of a pair means E^T Q (T) or E^* Q (Star); it
transforms by congruence with V, which is what makes the congruence
module's canonical structures a complete invariant whenever one of E, Q
is nonsingular.

For pairs whose product is (skew-)symmetric or (skew-)Hermitian, the
regular/nilpotent splitting and the nilpotent-pair reduction give a full
canonical form even when both matrices are singular, together with an
explicit witness of the transformation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .blocks import (
    _NIL2_E,
    _NIL2_Q,
    PairCanonicalStructure,
    StructuredPairForm,
)
from .congruence import (
    DEFAULT,
    EigenBackend,
    _column_space_complement_in,
    star_congruence_structure,
    t_congruence_structure,
)
from .errors import (
    BadInput,
    BothSingular,
    NotOrthogonal,
    ShapeMismatch,
    StructureInconsistent,
    ToleranceFailure,
    Unsupported,
    UnsupportedFlavor,
)
from .exactmat import (
    ExactMatrix,
    GaussianRational,
    ONE,
    ZERO,
    completion_basis,
    gq,
)
from .quadforms import (
    unit_congruence_herm,
    unit_congruence_skewsym,
    unit_congruence_sym,
)

__all__ = [
    "EquivalenceWitness",
    "pair_canonical",
    "check_equivalence",
    "is_lagrangian",
    "split_regular_nilpotent",
    "nilpotent_pair_counts",
    "nilpotent_pair_reduce",
    "structured_pair_canonical",
]


@dataclass(frozen=True)
class EquivalenceWitness:
    """A recorded transformation (U, V): apply() sends a pair to
    (U E V, U^{-T} Q V), with ^{-*} for Star kind."""

    U: ExactMatrix
    V: ExactMatrix
    kind: str
    v_unitary: bool = False

    def apply(self, E: ExactMatrix, Q: ExactMatrix):
        Uinv_adj = self.U.inv().adj(self.kind)
        return self.U @ E @ self.V, Uinv_adj @ Q @ self.V

    def compose_after(self, first: "EquivalenceWitness") -> "EquivalenceWitness":
        """Witness equal to applying `first`, then self."""
        if self.kind != first.kind:
            raise BadInput("cannot compose witnesses of different kinds")
        return EquivalenceWitness(
            self.U @ first.U,
            first.V @ self.V,
            self.kind,
            v_unitary=self.v_unitary and first.v_unitary,
        )


def _identity_witness(n: int, kind: str) -> EquivalenceWitness:
    eye = ExactMatrix.identity(n)
    return EquivalenceWitness(eye, eye, kind, v_unitary=True)


def _check_kind(kind: str):
    if kind not in ("T", "Star"):
        raise BadInput(f"unknown kind {kind!r}")


def _check_pair(E: ExactMatrix, Q: ExactMatrix):
    if not E.is_square() or not Q.is_square() or E.shape != Q.shape:
        raise ShapeMismatch("pair must consist of equal-size square matrices")


def _product(E: ExactMatrix, Q: ExactMatrix, kind: str) -> ExactMatrix:
    return E.adj(kind) @ Q


# ---------------------------------------------------------------------------
# Pairs with a nonsingular member.


def pair_canonical(
    E: ExactMatrix, Q: ExactMatrix, kind: str, backend: EigenBackend = DEFAULT
) -> PairCanonicalStructure:
    """Canonical structure of (E, Q) when at least one member is
    nonsingular: the congruence structure of the product, tagged with
    which side is nonsingular (E wins ties)."""
    _check_kind(kind)
    _check_pair(E, Q)
    if E.is_nonsingular():
        pivot = "ENonsingular"
    elif Q.is_nonsingular():
        pivot = "QNonsingular"
    else:
        raise BothSingular(
            "both matrices are singular; use the structured or nilpotent paths"
        )
    P = _product(E, Q, kind)
    if kind == "T":
        structure = t_congruence_structure(P, backend)
    else:
        structure = star_congruence_structure(P, backend)
    return PairCanonicalStructure(pivot=pivot, structure=structure)


def check_equivalence(
    E: ExactMatrix,
    Q: ExactMatrix,
    E1: ExactMatrix,
    Q1: ExactMatrix,
    kind: str,
    backend: EigenBackend = DEFAULT,
) -> bool:
    """Whether (E, Q) and (E1, Q1) lie in the same T-/*-equivalence orbit.

    Pairs with a nonsingular member are compared through pair_canonical;
    singular-singular pairs only through the structured flavors.
    """
    _check_kind(kind)
    _check_pair(E, Q)
    _check_pair(E1, Q1)
    if E.shape != E1.shape:
        return False
    ns0 = E.is_nonsingular() or Q.is_nonsingular()
    ns1 = E1.is_nonsingular() or Q1.is_nonsingular()
    if ns0 != ns1:
        return False
    if ns0:
        return pair_canonical(E, Q, kind, backend) == pair_canonical(
            E1, Q1, kind, backend
        )
    try:
        form0, _ = structured_pair_canonical(E, Q, kind)
        form1, _ = structured_pair_canonical(E1, Q1, kind)
    except UnsupportedFlavor as exc:
        raise Unsupported(
            "singular-singular pairs are compared only for structured "
            f"products: {exc}"
        ) from exc
    return form0 == form1


def is_lagrangian(E: ExactMatrix, Q: ExactMatrix, kind: str) -> bool:
    """Whether the columns of [E; Q] span a Lagrangian subspace: full
    column rank n and E^T Q = Q^T E (^* for Star)."""
    _check_kind(kind)
    _check_pair(E, Q)
    n = E.rows
    if E.vstack(Q).rank() != n:
        return False
    return _product(E, Q, kind) == _product(Q, E, kind)


# ---------------------------------------------------------------------------
# Regular / nilpotent splitting.


def split_regular_nilpotent(E: ExactMatrix, Q: ExactMatrix, kind: str):
    """Split (E, Q) as (I_k (+) En, R (+) Qn) for a product with one of the
    four (skew-)symmetries.

    Returns (witness, k, R, En, Qn) with k = rank of the product, R the
    nonsingular regular Gram block, and En^o Qn = 0.
    """
    _check_kind(kind)
    _check_pair(E, Q)
    n = E.rows
    P = _product(E, Q, kind)
    Po = P.adj(kind)
    if Po != P and Po != (-P):
        raise UnsupportedFlavor(
            "product is neither symmetric/Hermitian nor its skew variant"
        )
    nul = P.nullspace()
    k = n - nul.cols
    if k == 0:
        return _identity_witness(n, kind), 0, ExactMatrix.zeros(0, 0), E, Q
    C = _column_space_complement_in(nul, n)
    V = C.hstack(nul) if nul.cols else C
    EV = E @ V
    QV = Q @ V
    all_rows = range(n)
    C1 = EV.submatrix(all_rows, range(k))
    D1 = QV.submatrix(all_rows, range(k))
    R = C1.adj(kind) @ D1  # = C^o P C, nonsingular by construction
    if not R.is_nonsingular():
        raise StructureInconsistent("regular Gram block is singular")
    if k < n:
        # columns completing C1 to a basis, dual to the Q-side image
        C3 = completion_basis(C1, D1.adj(kind))
        F = C1.hstack(C3)
    else:
        F = C1
    U = F.inv()
    top = U @ EV
    qc = F.adj(kind) @ QV
    En = top.submatrix(range(k, n), range(k, n))
    Qn = qc.submatrix(range(k, n), range(k, n))
    expect_e = ExactMatrix.block_diag([ExactMatrix.identity(k), En])
    expect_q = ExactMatrix.block_diag([R, Qn])
    if top != expect_e or qc != expect_q:
        raise StructureInconsistent("splitting did not block-diagonalize")
    if not (En.adj(kind) @ Qn).is_zero():
        raise StructureInconsistent("nilpotent part is not product-orthogonal")
    return EquivalenceWitness(U, V, kind), k, R, En, Qn


# ---------------------------------------------------------------------------
# Nilpotent pairs: counts and reduction.


def nilpotent_pair_counts(
    En: ExactMatrix, Qn: ExactMatrix, kind: str = "Star"
) -> Tuple[int, int, int, int]:
    """Multiplicities (a, b, c, d) of (1,0), (0,1), (0,0) and the 2x2
    nilpotent block, from the rank formulas d = rank(Qn En^o),
    a = rank En - d, b = rank Qn - d, c = n - a - b - 2d."""
    _check_kind(kind)
    _check_pair(En, Qn)
    if not _product(En, Qn, kind).is_zero():
        raise NotOrthogonal("product of the nilpotent pair must vanish")
    n = En.rows
    d = (Qn @ En.adj(kind)).rank()
    a = En.rank() - d
    b = Qn.rank() - d
    c = n - a - b - 2 * d
    return a, b, c, d


def _nilpotent_layout(a: int, b: int, c: int, d: int):
    one = ExactMatrix([[1]])
    zero = ExactMatrix([[0]])
    e_blocks = [one] * a + [zero] * (b + c) + [_NIL2_E] * d
    q_blocks = [zero] * a + [one] * b + [zero] * c + [_NIL2_Q] * d
    if not e_blocks:
        return ExactMatrix.zeros(0, 0), ExactMatrix.zeros(0, 0)
    return (
        ExactMatrix.block_diag(e_blocks),
        ExactMatrix.block_diag(q_blocks),
    )


def _from_columns(cols: List[ExactMatrix], n: int) -> ExactMatrix:
    if not cols:
        return ExactMatrix.zeros(n, 0)
    out = cols[0]
    for c in cols[1:]:
        out = out.hstack(c)
    return out


def _pivot_columns(M: ExactMatrix) -> List[int]:
    return list(M.rref()[1])


def _exact_counts(A: ExactMatrix, B: ExactMatrix, kind: str):
    """(a, b, c, d) with d = dim of the intersection of the o-row spaces,
    the invariant that is preserved by arbitrary nonsingular V."""
    n = A.rows
    ra, rb = A.rank(), B.rank()
    d = ra + rb - A.vstack(B).rank()
    return ra - d, rb - d, n - ra - rb, d


def _nilpotent_reduce_exact(A: ExactMatrix, B: ExactMatrix, kind: str):
    n = A.rows
    a, b, c, d = _exact_counts(A, B, kind)
    K = A.vstack(B).nullspace()  # c + d columns
    K_A = A.nullspace()
    K_B = B.nullspace()
    s_cols = [K_B.submatrix(range(n), [j]) for j in _pivot_columns(A @ K_B)]
    t_cols = [K_A.submatrix(range(n), [j]) for j in _pivot_columns(B @ K_A)]
    if len(s_cols) != a or len(t_cols) != b:
        raise StructureInconsistent("kernel images have unexpected ranks")
    span = K_A.hstack(K_B) if K_B.cols else K_A
    X = _column_space_complement_in(span, n)
    if X.cols != d:
        raise StructureInconsistent("row-space intersection dimension drifted")
    x_cols = [X.submatrix(range(n), [j]) for j in range(d)]
    k_cols = [K.submatrix(range(n), [j]) for j in range(K.cols)]

    v_cols: List[ExactMatrix] = []
    v_cols.extend(s_cols)
    v_cols.extend(t_cols)
    v_cols.extend(k_cols[:c])
    for j in range(d):
        v_cols.append(x_cols[j])
        v_cols.append(k_cols[c + j])
    V = _from_columns(v_cols, n)
    if not V.is_nonsingular():
        raise StructureInconsistent("assembled column transform is singular")

    F = _from_columns([A @ col for col in s_cols + x_cols], n)
    H = _from_columns([B @ col for col in t_cols + x_cols], n)
    e_positions = list(range(a)) + [a + b + c + 2 * j for j in range(d)]
    q_positions = list(range(a, a + b)) + [a + b + c + 2 * j + 1 for j in range(d)]
    free_positions = list(range(a + b, a + b + c))

    Hadj = H.adj(kind)
    if q_positions:
        W_B = Hadj.solve_general(ExactMatrix.identity(b + d))
        if W_B is None:
            raise StructureInconsistent("dual column system is unsolvable")
    else:
        W_B = ExactMatrix.zeros(n, 0)
    ker = Hadj.nullspace() if q_positions else ExactMatrix.identity(n)
    # complete the E-image columns to a basis of ker(H^o)
    pool = F.hstack(ker) if F.cols else ker
    free_src = [j - F.cols for j in _pivot_columns(pool) if j >= F.cols]
    if len(free_src) != c:
        raise StructureInconsistent("free-column completion has wrong size")

    w_cols: List[Optional[ExactMatrix]] = [None] * n
    for idx, pos in enumerate(e_positions):
        w_cols[pos] = F.submatrix(range(n), [idx])
    for idx, pos in enumerate(q_positions):
        w_cols[pos] = W_B.submatrix(range(n), [idx])
    for idx, pos in enumerate(free_positions):
        w_cols[pos] = ker.submatrix(range(n), [free_src[idx]])
    W = _from_columns([col for col in w_cols if col is not None], n)
    if W.cols != n or not W.is_nonsingular():
        raise StructureInconsistent("assembled row transform is singular")

    U = W.inv()
    E_c, Q_c = _nilpotent_layout(a, b, c, d)
    if U @ A @ V != E_c or W.adj(kind) @ B @ V != Q_c:
        raise StructureInconsistent("nilpotent reduction failed verification")
    return EquivalenceWitness(U, V, kind), (E_c, Q_c)


# --- float mode: unitary column transform ----------------------------------


def _np_of(M: ExactMatrix) -> np.ndarray:
    return np.array(
        [
            [complex(M[i, j].re) + 1j * complex(M[i, j].im) for j in range(M.cols)]
            for i in range(M.rows)
        ],
        dtype=complex,
    ).reshape(M.rows, M.cols)


def _exact_of_np(M: np.ndarray) -> ExactMatrix:
    from gmpy2 import mpq

    rows, cols = M.shape
    return ExactMatrix(
        [
            [
                GaussianRational(mpq(float(M[i, j].real)), mpq(float(M[i, j].imag)))
                for j in range(cols)
            ]
            for i in range(rows)
        ],
        rows,
        cols,
    )


_FLOAT_RANK_TOL = 1e-9


def _orth(M: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the column space."""
    if M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > _FLOAT_RANK_TOL * max(1.0, s[0])))
    return u[:, :r]


def _null(M: np.ndarray, ambient: int) -> np.ndarray:
    """Orthonormal basis of the null space of M (columns)."""
    if M.size == 0:
        return np.eye(ambient, dtype=complex)
    u, s, vh = np.linalg.svd(M)
    r = int(np.sum(s > _FLOAT_RANK_TOL * max(1.0, s[0])))
    return vh[r:, :].conj().T


def _adj_np(M: np.ndarray, kind: str) -> np.ndarray:
    return M.conj().T if kind == "Star" else M.T


def _nilpotent_reduce_float(A0: ExactMatrix, B0: ExactMatrix, kind: str, tau: float):
    """Unitary-V reduction in floating point.

    The 2x2-block count under unitary V equals the row-space intersection
    dimension; when the even alternating product disagrees with it (Star),
    or the kernel geometry is oblique, no unitary reduction exists and the
    call is refused.
    """
    n = A0.rows
    a, b, c, d = _exact_counts(A0, B0, kind)
    if kind == "Star":
        d_rank = (B0 @ A0.adj(kind)).rank()
        if d_rank != d:
            raise StructureInconsistent(
                "no unitary column transform reaches a canonical direct sum: "
                f"the even alternating product has rank {d_rank} but the "
                f"row-space intersection has dimension {d}"
            )
    if n == 0:
        return _identity_witness(0, kind), _nilpotent_layout(0, 0, 0, 0)
    A = _np_of(A0)
    B = _np_of(B0)
    scale = max(np.max(np.abs(A)), np.max(np.abs(B)), 1.0)

    ker_a = _null(A, n)
    ker_b = _null(B, n)
    K = _null(np.concatenate([A, B], axis=0), n)
    if ker_a.shape[1] != b + c + d or ker_b.shape[1] != a + c + d \
            or K.shape[1] != c + d:
        raise StructureInconsistent("float kernel dimensions drifted")
    proj_out_K = np.eye(n, dtype=complex) - K @ K.conj().T
    s_cols = _orth(proj_out_K @ ker_b)  # ker B beyond the common kernel
    t_cols = _orth(proj_out_K @ ker_a)
    if s_cols.shape[1] != a or t_cols.shape[1] != b:
        raise StructureInconsistent("float kernel complements drifted")
    if a and b and np.max(np.abs(s_cols.conj().T @ t_cols)) > 1e-8:
        raise StructureInconsistent(
            "kernels are oblique: no unitary column transform separates the "
            "(1,0) and (0,1) summands"
        )
    x_cols = _null(np.concatenate([ker_a, ker_b], axis=1).conj().T, n)
    if x_cols.shape[1] != d:
        raise StructureInconsistent("float complement dimension drifted")

    V = np.zeros((n, n), dtype=complex)
    V[:, :a] = s_cols
    V[:, a:a + b] = t_cols
    V[:, a + b:a + b + c] = K[:, :c]
    for j in range(d):
        V[:, a + b + c + 2 * j] = x_cols[:, j]
        V[:, a + b + c + 2 * j + 1] = K[:, c + j]

    F = np.concatenate([A @ s_cols, A @ x_cols], axis=1)  # n x (a+d)
    H = np.concatenate([B @ t_cols, B @ x_cols], axis=1)  # n x (b+d)
    Hadj = _adj_np(H, kind)
    W = np.zeros((n, n), dtype=complex)
    e_positions = list(range(a)) + [a + b + c + 2 * j for j in range(d)]
    q_positions = list(range(a, a + b)) + [a + b + c + 2 * j + 1 for j in range(d)]
    for idx, pos in enumerate(e_positions):
        W[:, pos] = F[:, idx]
    if q_positions:
        W_B = np.linalg.lstsq(Hadj, np.eye(b + d, dtype=complex), rcond=None)[0]
        for idx, pos in enumerate(q_positions):
            W[:, pos] = W_B[:, idx]
    ker_h = _null(Hadj, n)  # contains the F columns
    Fo = _orth(F)
    free = _orth((np.eye(n, dtype=complex) - Fo @ Fo.conj().T) @ ker_h)
    if free.shape[1] != c:
        raise StructureInconsistent("float free-column completion drifted")
    W[:, a + b:a + b + c] = free

    U = np.linalg.inv(W)
    E_c, Q_c = _nilpotent_layout(a, b, c, d)
    res_e = np.max(np.abs(U @ A @ V - _np_of(E_c)))
    res_q = np.max(np.abs(_adj_np(W, kind) @ B @ V - _np_of(Q_c)))
    if max(res_e, res_q) > 1e-6 * scale:
        raise ToleranceFailure(
            f"reduction residual {max(res_e, res_q):.3g} exceeds tolerance"
        )
    unit_err = np.max(np.abs(V.conj().T @ V - np.eye(n)))
    if unit_err > tau:
        raise ToleranceFailure(
            f"column transform deviates from unitary by {unit_err:.3g} > {tau:.3g}"
        )
    witness = EquivalenceWitness(
        _exact_of_np(U), _exact_of_np(V), kind, v_unitary=True
    )
    return witness, (E_c, Q_c)


def nilpotent_pair_reduce(
    En: ExactMatrix,
    Qn: ExactMatrix,
    mode: str = "ExactNonsingularV",
    kind: str = "Star",
    tau: float = 1e-10,
):
    """Reduce a product-orthogonal pair to its direct sum of nilpotent
    canonical summands.

    ExactNonsingularV: exact arithmetic, V nonsingular; the 2x2-block
    count is the dimension of the intersection of the o-row spaces (the
    invariant of the full group action).  FloatUnitaryV: the literal
    unitary-V recursion in floating point, refused when no unitary
    reduction exists (the two counts above disagree).
    """
    _check_kind(kind)
    _check_pair(En, Qn)
    if not _product(En, Qn, kind).is_zero():
        raise NotOrthogonal("product of the nilpotent pair must vanish")
    if mode == "ExactNonsingularV":
        return _nilpotent_reduce_exact(En, Qn, kind)
    if mode == "FloatUnitaryV":
        return _nilpotent_reduce_float(En, Qn, kind, tau)
    raise BadInput(f"unknown reduction mode {mode!r}")


# ---------------------------------------------------------------------------
# Structured pairs.


def _detect_flavor(P: ExactMatrix, kind: str) -> str:
    Po = P.adj(kind)
    if kind == "Star":
        if Po == P:
            return "HermStar"
        if Po == (-P):
            return "SkewHermStar"
    else:
        if Po == P:
            return "SymT"
        if Po == (-P):
            return "SkewSymT"
    raise UnsupportedFlavor(
        f"product has no (skew-)symmetry under kind {kind!r}"
    )


def _regular_unit_witness(R: ExactMatrix, flavor: str):
    """(X, n_plus, n_minus) taking the regular Gram block to its unit
    canonical diagonal by congruence; X may be None (unwitnessed)."""
    k = R.rows
    if flavor == "HermStar":
        return unit_congruence_herm(R)
    if flavor == "SkewHermStar":
        M = R.scale(gq(0, -1))  # -i R is Hermitian
        X, npl, nmi = unit_congruence_herm(M)
        return X, npl, nmi
    if flavor == "SymT":
        X = unit_congruence_sym(R)
        return X, k, 0
    # SkewSymT
    X = unit_congruence_skewsym(R)
    return X, k // 2, 0


def structured_pair_canonical(E: ExactMatrix, Q: ExactMatrix, kind: str):
    """Full canonical form (StructuredPairForm, witness) for pairs whose
    product is (skew-)symmetric / (skew-)Hermitian; both members may be
    singular.  The witness is None when the regular part's unit
    congruence could not be constructed over Q(i)."""
    _check_kind(kind)
    _check_pair(E, Q)
    P = _product(E, Q, kind)
    flavor = _detect_flavor(P, kind)
    w_split, k, R, En, Qn = split_regular_nilpotent(E, Q, kind)
    if flavor == "SkewSymT" and k % 2:
        raise StructureInconsistent("odd-rank skew-symmetric regular part")
    X, n_plus, n_minus = _regular_unit_witness(R, flavor)
    w_nil, _pair = _nilpotent_reduce_exact(En, Qn, kind)
    a, b, c, d = _exact_counts(En, Qn, kind)
    form = StructuredPairForm(
        flavor=flavor, n_plus=n_plus, n_minus=n_minus, a=a, b=b, c=c, d=d
    )
    form.validate()
    if X is None:
        return form, None
    # compose: split, then (X on the regular block) + (nilpotent witness)
    U2 = ExactMatrix.block_diag([X.inv(), w_nil.U])
    V2 = ExactMatrix.block_diag([X, w_nil.V])
    witness = EquivalenceWitness(U2, V2, kind).compose_after(w_split)
    from .blocks import realize_structured_form

    target = realize_structured_form(form)
    got = witness.apply(E, Q)
    if got[0] != target[0] or got[1] != target[1]:
        raise StructureInconsistent(
            "structured canonical witness failed verification"
        )
    return form, witness

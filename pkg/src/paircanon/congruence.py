"""Congruence canonical structure of a single square matrix.

Pipeline: strip the Type-0 (nilpotent) part by an exact quotient iteration,
then classify the nonsingular core through the Jordan structure of its
cosquare A^{-T}A (T) or *-cosquare A^{-*}A (Star).  Unit-circle *-cosquare
eigenvalues additionally carry a sign characteristic, recovered from inertias
of compressions of A to the root subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import sympy

from .blocks import CongruenceStructure, normalize_structure
from .errors import EigenFailure, Singular, StructureInconsistent
from .exactmat import (
    ExactMatrix,
    GaussianRational,
    ONE,
    ZERO,
    gq,
    hermitian_inertia,
)

__all__ = [
    "EigenBackend",
    "EigenReport",
    "cosquare_jordan",
    "type0_split",
    "t_congruence_structure",
    "star_congruence_structure",
]


@dataclass(frozen=True)
class EigenBackend:
    """Eigenvalue backend selection.

    mode 'ExactCandidates': exact characteristic polynomial, roots found in
    Q(i) by factorization; falls back to Float when the spectrum leaves Q(i)
    (only if allow_float).  mode 'Float': double-precision eigensolve with
    relative clustering gap tau.
    """

    mode: str = "ExactCandidates"
    tau: float = 1e-8
    allow_float: bool = True


EXACT = EigenBackend(mode="ExactCandidates", allow_float=False)
DEFAULT = EigenBackend()


@dataclass(frozen=True)
class EigenReport:
    """Eigenvalues with Weyr characteristics; exact entries are Gaussian
    rationals, float entries are (re, im) pairs."""

    eigenvalues: Tuple[Tuple[object, bool, Tuple[int, ...]], ...]

    def total_size(self) -> int:
        return sum(sum(w) for _, _, w in self.eigenvalues)


# ---------------------------------------------------------------------------
# Type-0 extraction.
#
# The congruence canonical form of A is mirrored by the Kronecker structure
# of the pencil A + lambda*A^o (o = T or *), which transforms by strict
# equivalence under congruence of A:
#   J_{2m+1}(0)  <->  one right and one left minimal index m,
#   J_{2m}(0)    <->  one Jordan block of size m at 0 and one at infinity,
#   regular part <->  the finite-nonzero spectrum.
# Minimal indices come from nullities of block-Toeplitz convolution systems,
# Jordan data at 0/infinity from nullities of Jordan-chain systems; both are
# plain exact rank computations, no eigenvalues needed.


def _column_space_basis(M: ExactMatrix) -> ExactMatrix:
    """Basis of the column space, as columns."""
    R, pivots = M.transpose().rref()
    rows = [list(R.row(i)) for i in range(len(pivots))]
    if not rows:
        return ExactMatrix([[] for _ in range(M.rows)], M.rows, 0)
    return ExactMatrix(rows).transpose()


def _column_space_complement_in(K: ExactMatrix, ambient: int) -> ExactMatrix:
    """Standard basis vectors spanning a complement of col(K)."""
    _, pivots = K.transpose().rref()
    pivot_set = set(pivots)
    cols = [j for j in range(ambient) if j not in pivot_set]
    return ExactMatrix.from_function(
        ambient, len(cols), lambda i, j: ONE if i == cols[j] else ZERO
    )


def _block_grid(blocks, block_rows, block_cols, n) -> ExactMatrix:
    """Assemble a sparse grid {(i, j): ExactMatrix n x n} into one matrix."""
    rows = []
    for i in range(block_rows):
        strip = None
        for j in range(block_cols):
            piece = blocks.get((i, j)) or ExactMatrix.zeros(n, n)
            strip = piece if strip is None else strip.hstack(piece)
        rows.append(strip)
    out = rows[0]
    for strip in rows[1:]:
        out = out.vstack(strip)
    return out


def _toeplitz_nullity(M: ExactMatrix, N: ExactMatrix, k: int) -> int:
    """Nullity of the degree-(k-1) polynomial-kernel system of M + lambda*N:
    M x_0 = 0, M x_j + N x_{j-1} = 0 (j < k), N x_{k-1} = 0."""
    n = M.rows
    blocks = {}
    for j in range(k):
        blocks[(j, j)] = M
        blocks[(j + 1, j)] = N
    T = _block_grid(blocks, k + 1, k, n)
    return T.cols - T.rank()


def _chain_kernel(M: ExactMatrix, N: ExactMatrix, length: int) -> ExactMatrix:
    """Kernel of the Jordan-chain system at 0 for M + lambda*N:
    M x_0 = 0, M x_j + N x_{j-1} = 0 (j = 1..length-1)."""
    n = M.rows
    blocks = {}
    for j in range(length):
        blocks[(j, j)] = M
        if j:
            blocks[(j, j - 1)] = N
    L = _block_grid(blocks, length, length, n)
    return L.nullspace()


def _chain_component_span(M: ExactMatrix, N: ExactMatrix, length: int) -> ExactMatrix:
    """Span of every chain-vector component x_j over all chain solutions."""
    n = M.rows
    ker = _chain_kernel(M, N, length)
    if ker.cols == 0:
        return ExactMatrix([[] for _ in range(n)], n, 0)
    pieces = [ker.submatrix(range(j * n, (j + 1) * n), range(ker.cols))
              for j in range(length)]
    stacked = pieces[0]
    for p in pieces[1:]:
        stacked = stacked.hstack(p)
    return _column_space_basis(stacked)


def _type0_sizes(A: ExactMatrix, Ao: ExactMatrix) -> List[int]:
    n = A.rows
    if n == 0:
        return []
    sizes: List[int] = []
    # Nullity(T_k) = sum_i max(0, k - eps_i); successive differences count
    # #{eps <= k-1}.
    nullities = [0]
    kmax = n // 2 + 2
    for k in range(1, kmax + 1):
        nullities.append(_toeplitz_nullity(A, Ao, k))
    counts_le = [nullities[k] - nullities[k - 1] for k in range(1, kmax + 1)]
    # counts_le[k-1] = #{eps <= k-1}
    n_eps = counts_le[-1]
    for m in range(kmax - 1):
        le_m = counts_le[m]
        le_m_minus = counts_le[m - 1] if m >= 1 else 0
        cnt = le_m - le_m_minus
        sizes.extend([2 * m + 1] * cnt)
    # Even sizes: Jordan structure of the pencil at 0; each right minimal
    # index inflates every chain level by one.
    jmax = n // 2 + 1
    ell = [0]
    for j in range(1, jmax + 1):
        ker = _chain_kernel(A, Ao, j)
        ell.append(ker.cols)
    w = [ell[j] - ell[j - 1] - n_eps for j in range(1, jmax + 1)]
    # w[j-1] = #{Jordan-at-0 blocks of size >= j}
    w.append(0)
    for m in range(1, jmax + 1):
        cnt = w[m - 1] - w[m]
        if cnt < 0:
            raise StructureInconsistent("pencil Jordan data at 0 is inconsistent")
        sizes.extend([2 * m] * cnt)
    sizes.sort(reverse=True)
    return sizes


def type0_split(A: ExactMatrix, kind: str):
    """Multiset of Type-0 block sizes plus a nonsingular core congruent to
    the regular part of A's congruence canonical form.

    Sizes come from exact rank data of the pencil A + lambda*A^o.  The core
    is the compression of A to U = D^perp_A (both sides), where D is the span
    of the pencil's Jordan chains at 0 and infinity: in canonical coordinates
    U is exactly (regular part) + (radical), so compressing A to U modulo the
    radical of the restricted form reproduces the regular part up to
    congruence.
    """
    if not A.is_square():
        raise Singular("type0_split needs a square matrix")
    n = A.rows
    Ao = A.adj(kind)
    sizes = _type0_sizes(A, Ao)
    if not sizes:
        return sizes, A
    # D: chain components at 0 (pencil A + l*Ao) and at infinity (reversed).
    d0 = _chain_component_span(A, Ao, n)
    dinf = _chain_component_span(Ao, A, n)
    D = _column_space_basis(d0.hstack(dinf))
    # U = {x : A(d, x) = 0 and A(x, d) = 0 for all d in D}.
    lhs = (D.adj(kind) @ A).vstack(((A @ D).adj(kind)))
    U = lhs.nullspace()
    G = U.adj(kind) @ A @ U
    # Radical of the restricted form: two-sided kernel of G.
    K = G.vstack(G.adj(kind)).nullspace()
    C2 = _column_space_complement_in(K, U.cols)
    core = C2.adj(kind) @ G @ C2
    if core.rows != n - sum(sizes) or not core.is_nonsingular():
        raise StructureInconsistent("regular-part extraction failed")
    return sizes, core


# ---------------------------------------------------------------------------
# Eigen backends


def _charpoly_roots_exact(coeffs: List[GaussianRational]):
    """Roots in Q(i) of a monic polynomial, with multiplicities, plus the
    total degree of the part that does not split over Q(i)."""
    x = sympy.Symbol("x")
    expr = sympy.Integer(0)
    deg = len(coeffs) - 1
    for k, c in enumerate(coeffs):
        term = sympy.Rational(str(c.re)) + sympy.I * sympy.Rational(str(c.im))
        expr += term * x ** (deg - k)
    poly = sympy.Poly(expr, x, domain="QQ_I")
    _, factors = poly.factor_list()
    roots: List[Tuple[GaussianRational, int]] = []
    missing = 0
    for fac, mult in factors:
        if fac.degree() == 1:
            a1, a0 = fac.all_coeffs()
            root = -_from_sympy(a0) / _from_sympy(a1)
            roots.append((root, mult))
        else:
            missing += fac.degree() * mult
    return roots, missing


def _from_sympy(v) -> GaussianRational:
    re, im = sympy.expand(v).as_real_imag()
    return GaussianRational(_mpq_of(re), _mpq_of(im))


def _mpq_of(r):
    from gmpy2 import mpq

    r = sympy.Rational(r)
    return mpq(int(r.p), int(r.q))


def _weyr_at(C: ExactMatrix, lam: GaussianRational, multiplicity: int):
    """Weyr characteristic of C at exact eigenvalue lam."""
    n = C.rows
    shifted = C - ExactMatrix.identity(n).scale(lam)
    weyr = []
    prev = 0
    power = ExactMatrix.identity(n)
    while sum(weyr) < multiplicity:
        power = power @ shifted
        nullity = n - power.rank()
        weyr.append(nullity - prev)
        prev = nullity
    if sum(weyr) != multiplicity or any(
        weyr[i] < weyr[i + 1] for i in range(len(weyr) - 1)
    ):
        raise StructureInconsistent("Weyr data inconsistent with multiplicity")
    return tuple(weyr)


def _cosquare(A: ExactMatrix, kind: str) -> ExactMatrix:
    if not A.is_nonsingular():
        raise Singular("cosquare needs a nonsingular matrix")
    return A.adj(kind).inv() @ A


def _float_eigen_report(C: ExactMatrix, tau: float) -> EigenReport:
    import numpy as np

    n = C.rows
    M = np.array([[C[i, j].to_complex() for j in range(n)] for i in range(n)])
    vals = np.linalg.eigvals(M)
    clusters: List[List[complex]] = []
    for v in sorted(vals, key=lambda z: (z.real, z.imag)):
        for cl in clusters:
            ref = cl[0]
            if abs(v - ref) <= tau * max(1.0, abs(ref)):
                cl.append(v)
                break
        else:
            clusters.append([v])
    for a in range(len(clusters)):
        for b in range(a + 1, len(clusters)):
            za, zb = clusters[a][0], clusters[b][0]
            if abs(za - zb) <= 10 * tau * max(1.0, abs(za)):
                raise EigenFailure("float eigenvalue clusters not separable")
    eigs = []
    for cl in clusters:
        center = sum(cl) / len(cl)
        mult = len(cl)
        shifted = M - center * np.eye(n)
        weyr = []
        prev = 0
        power = np.eye(n, dtype=complex)
        while sum(weyr) < mult and len(weyr) < n:
            power = power @ shifted
            s = np.linalg.svd(power, compute_uv=False)
            rank = int(np.sum(s > tau * max(1.0, s[0] if len(s) else 1.0)))
            nullity = n - rank
            weyr.append(nullity - prev)
            prev = nullity
        eigs.append(((center.real, center.imag), False, tuple(weyr)))
    return EigenReport(tuple(eigs))


def cosquare_jordan(
    A: ExactMatrix, kind: str, backend: EigenBackend = DEFAULT
) -> EigenReport:
    """Jordan structure (eigenvalues + Weyr characteristics) of the cosquare
    A^{-T}A (T) or A^{-*}A (Star)."""
    C = _cosquare(A, kind)
    return _jordan_report(C, backend)


def _jordan_report(C: ExactMatrix, backend: EigenBackend) -> EigenReport:
    if backend.mode == "Float":
        return _float_eigen_report(C, backend.tau)
    roots, missing = _charpoly_roots_exact(C.charpoly())
    if missing:
        if backend.allow_float:
            return _float_eigen_report(C, backend.tau)
        raise EigenFailure(
            f"spectrum leaves Q(i): degree {missing} irreducible factor"
        )
    eigs = []
    for lam, mult in roots:
        eigs.append((lam, True, _weyr_at(C, lam, mult)))
    eigs.sort(key=lambda e: e[0].sort_key())
    return EigenReport(tuple(eigs))


def _blocks_from_weyr(weyr) -> Dict[int, int]:
    """Jordan block sizes with counts from a Weyr characteristic."""
    out: Dict[int, int] = {}
    padded = list(weyr) + [0]
    for k in range(len(weyr)):
        cnt = padded[k] - padded[k + 1]
        if cnt:
            out[k + 1] = cnt
    return out


# ---------------------------------------------------------------------------
# T-congruence classification


def t_congruence_structure(
    A: ExactMatrix, backend: EigenBackend = DEFAULT
) -> CongruenceStructure:
    type0, core = type0_split(A, "T")
    gammas: List[int] = []
    type2: List[Tuple[int, GaussianRational]] = []
    if core.rows:
        report = cosquare_jordan(core, "T", backend)
        blocks = _exact_block_table(report)
        handled = set()
        for lam in list(blocks):
            if lam in handled:
                continue
            sizes = blocks[lam]
            if lam == gq(1) or lam == gq(-1):
                sign = 1 if lam == gq(1) else -1
                for k, cnt in sorted(sizes.items()):
                    gamma_parity = (k % 2 == 1) if sign == 1 else (k % 2 == 0)
                    if gamma_parity:
                        gammas.extend([k] * cnt)
                    else:
                        if cnt % 2:
                            raise StructureInconsistent(
                                f"unpaired J_{k}({lam}) blocks in cosquare"
                            )
                        type2.extend([(k, lam)] * (cnt // 2))
                handled.add(lam)
            else:
                inv = ONE / lam
                if inv not in blocks or blocks[inv] != sizes:
                    raise StructureInconsistent(
                        f"cosquare blocks at {lam} and {inv} do not pair"
                    )
                for k, cnt in sorted(sizes.items()):
                    type2.extend([(k, lam)] * cnt)
                handled.add(lam)
                handled.add(inv)
    return normalize_structure(
        CongruenceStructure(
            kind="T",
            type0=tuple(type0),
            typeI=tuple(gammas),
            typeII=tuple(type2),
        )
    )


def _exact_block_table(report: EigenReport):
    blocks: Dict[GaussianRational, Dict[int, int]] = {}
    for lam, exact, weyr in report.eigenvalues:
        if not exact:
            raise EigenFailure("float eigenvalues cannot be classified exactly")
        blocks[lam] = _blocks_from_weyr(weyr)
    return blocks


# ---------------------------------------------------------------------------
# Star-congruence classification with sign characteristic


def _root_subspace(C: ExactMatrix, lam: GaussianRational) -> ExactMatrix:
    n = C.rows
    shifted = C - ExactMatrix.identity(n).scale(lam)
    return (shifted ** n).nullspace()


def _restricted_action(C: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """Matrix of C restricted to the C-invariant column space of B."""
    X = B.solve_general(C @ B)
    if X is None:
        raise StructureInconsistent("root subspace is not invariant")
    return X


def _sign_characteristic(
    A: ExactMatrix,
    C: ExactMatrix,
    lam: GaussianRational,
    alpha0: GaussianRational,
    sizes: Dict[int, int],
) -> Dict[int, Tuple[int, int]]:
    """Counts (plus, minus) per block size for unit eigenvalue lam = alpha0^2.

    The Hermitian part of (1/alpha0) (i lam)^{-j} G0 N^j on the root subspace
    (G0 the restricted form, N the nilpotent part of the restricted cosquare)
    has signature sum of epsilon over blocks of size k with k - j odd,
    independent of alpha0; solving from the largest size downward separates
    the per-size sign sums.
    """
    B = _root_subspace(C, lam)
    CB = _restricted_action(C, B)
    m = B.cols
    G0 = B.conj_transpose() @ A @ B
    N = CB - ExactMatrix.identity(m).scale(lam)
    max_k = max(sizes) if sizes else 0
    sig: List[int] = []
    Nj = ExactMatrix.identity(m)
    scale = ONE / alpha0
    ilam = gq(0, 1) * lam
    for j in range(max_k):
        scaled = (G0 @ Nj).scale(scale)
        herm = (scaled + scaled.conj_transpose()).scale(gq("1/2"))
        np_, nm_, _ = hermitian_inertia(herm)
        sig.append(np_ - nm_)
        Nj = Nj @ N
        scale = scale / ilam
    # Solve the triangular system for per-size sign sums s_k.
    s: Dict[int, int] = {}
    for k in range(max_k, 0, -1):
        val = sig[k - 1] if k - 1 < len(sig) else 0
        for kk in range(k + 1, max_k + 1):
            if (kk - (k - 1)) % 2 == 1:
                val -= s.get(kk, 0)
        s[k] = val
    out: Dict[int, Tuple[int, int]] = {}
    for k, cnt in sizes.items():
        sk = s.get(k, 0)
        if (cnt + sk) % 2 or abs(sk) > cnt:
            raise StructureInconsistent(
                f"sign characteristic {sk} incompatible with {cnt} blocks of size {k}"
            )
        plus = (cnt + sk) // 2
        out[k] = (plus, cnt - plus)
    return out


def star_congruence_structure(
    A: ExactMatrix, backend: EigenBackend = DEFAULT
) -> CongruenceStructure:
    type0, core = type0_split(A, "Star")
    deltas: List[Tuple[int, GaussianRational]] = []
    type2: List[Tuple[int, GaussianRational]] = []
    if core.rows:
        C = _cosquare(core, "Star")
        report = _jordan_report(C, backend)
        blocks = _exact_block_table(report)
        handled = set()
        for lam in list(blocks):
            if lam in handled:
                continue
            sizes = blocks[lam]
            n2 = lam.abs2_q()
            if n2 == 1:
                alpha0 = lam.sqrt()
                if alpha0 is None:
                    raise StructureInconsistent(
                        f"unit eigenvalue {lam} has no square root in Q(i)"
                    )
                signed = _sign_characteristic(core, C, lam, alpha0, sizes)
                for k in sorted(signed):
                    plus, minus = signed[k]
                    deltas.extend([(k, alpha0)] * plus)
                    deltas.extend([(k, -alpha0)] * minus)
                handled.add(lam)
            else:
                partner = ONE / lam.conj()
                if partner not in blocks or blocks[partner] != sizes:
                    raise StructureInconsistent(
                        f"*-cosquare blocks at {lam} and {partner} do not pair"
                    )
                rep = lam if n2 > 1 else partner
                for k, cnt in sorted(sizes.items()):
                    type2.extend([(k, rep)] * cnt)
                handled.add(lam)
                handled.add(partner)
    return normalize_structure(
        CongruenceStructure(
            kind="Star",
            type0=tuple(type0),
            typeI=tuple(deltas),
            typeII=tuple(type2),
        )
    )

"""Brute-force ground truth: exact nullities of the matrix-equation systems
that define orbit codimensions and block interactions.

Systems are assembled by evaluating the defining linear (or real-linear) map
on every basis unknown and stacking the vectorized results as columns; the
nullity is then an exact rank computation.  T-kind systems are complex-linear
(nullity counted over C); Star-kind systems involve conjugation and are only
real-linear, so unknowns and equations are split into real and imaginary
parts and the nullity is counted over R.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import DeskScaleExceeded, ShapeMismatch
from .exactmat import ExactMatrix, GaussianRational, ONE, ZERO, I as IMAG

__all__ = [
    "LinearSystemNullity",
    "tangent_map",
    "nullity_congruence_system",
    "nullity_pair_system",
    "interaction_nullity",
]

MAX_REAL_UNKNOWNS = 20_000


@dataclass(frozen=True)
class LinearSystemNullity:
    real_dim: int
    complex_dim: Optional[int]
    unknown_shapes: Tuple[Tuple[int, int], ...]


def tangent_map(E, Q, X, Y, kind: str):
    """The orbit tangent map: (XE + EY, -X^T Q + QY), with ^* for Star."""
    try:
        return (X @ E + E @ Y, -(X.adj(kind) @ Q) + Q @ Y)
    except ShapeMismatch as exc:
        raise ShapeMismatch(f"tangent_map shapes: {exc}") from exc


def _vec(mats: List[ExactMatrix]) -> List[GaussianRational]:
    out = []
    for m in mats:
        for i in range(m.rows):
            out.extend(m.row(i))
    return out


def _basis_matrices(shape, scalar):
    rows, cols = shape
    for i in range(rows):
        for j in range(cols):
            m = [[ZERO] * cols for _ in range(rows)]
            m[i][j] = scalar
            yield ExactMatrix(m, rows, cols)


def _system_nullity(unknown_shapes, apply_fn, kind: str) -> LinearSystemNullity:
    """Nullity of the linear map given by apply_fn on the tuple of unknowns."""
    n_complex = sum(r * c for r, c in unknown_shapes)
    if 2 * n_complex > MAX_REAL_UNKNOWNS:
        raise DeskScaleExceeded(
            f"{2 * n_complex} real unknowns exceeds the oracle limit"
        )
    zero_unknowns = [ExactMatrix.zeros(r, c) for r, c in unknown_shapes]
    columns: List[List[GaussianRational]] = []
    scalars = (ONE,) if kind == "T" else (ONE, IMAG)
    for slot in range(len(unknown_shapes)):
        for scalar in scalars:
            for basis in _basis_matrices(unknown_shapes[slot], scalar):
                args = list(zero_unknowns)
                args[slot] = basis
                columns.append(_vec(list(apply_fn(*args))))
    if not columns:
        return LinearSystemNullity(0, 0 if kind == "T" else None,
                                   tuple(unknown_shapes))
    if kind == "T":
        system = ExactMatrix(list(zip(*columns)))
        rank = system.rank()
        complex_dim = n_complex - rank
        return LinearSystemNullity(2 * complex_dim, complex_dim,
                                   tuple(unknown_shapes))
    # Star: realify equations (the map is only real-linear).
    real_rows: List[List[GaussianRational]] = []
    for i in range(len(columns[0])):
        real_rows.append([GaussianRational(col[i].re) for col in columns])
        real_rows.append([GaussianRational(col[i].im) for col in columns])
    system = ExactMatrix(real_rows)
    rank = system.rank()
    return LinearSystemNullity(2 * n_complex - rank, None, tuple(unknown_shapes))


def nullity_congruence_system(M: ExactMatrix, kind: str) -> LinearSystemNullity:
    """Nullity of X M + M X^T = 0 (T) or X M + M X^* = 0 (Star)."""
    if not M.is_square():
        raise ShapeMismatch("congruence system needs a square matrix")
    n = M.rows
    return _system_nullity(
        [(n, n)], lambda X: (X @ M + M @ X.adj(kind),), kind
    )


def nullity_pair_system(E: ExactMatrix, Q: ExactMatrix, kind: str) -> LinearSystemNullity:
    """Nullity of XE + EY = 0, -X^T Q + QY = 0 (^* for Star)."""
    if E.shape != Q.shape or not E.is_square():
        raise ShapeMismatch("pair system needs equal square matrices")
    n = E.rows
    return _system_nullity(
        [(n, n), (n, n)], lambda X, Y: tangent_map(E, Q, X, Y, kind), kind
    )


def interaction_nullity(M: ExactMatrix, N: ExactMatrix, kind: str) -> LinearSystemNullity:
    """Nullity of the coupled system X M + N Y^T = 0, Y N + M X^T = 0 with
    X of shape k x m and Y of shape m x k (m = dim M, k = dim N)."""
    if not (M.is_square() and N.is_square()):
        raise ShapeMismatch("interaction needs square blocks")
    m, k = M.rows, N.rows
    return _system_nullity(
        [(k, m), (m, k)],
        lambda X, Y: (X @ M + N @ Y.adj(kind), Y @ N + M @ X.adj(kind)),
        kind,
    )

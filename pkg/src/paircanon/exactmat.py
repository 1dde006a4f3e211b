"""Exact Gaussian-rational scalars and dense matrices.

Scalars live in Q(i) with arbitrary-precision rational real and imaginary
parts (gmpy2.mpq).  Matrices are immutable, dense, row-major.  Everything in
this module is exact: no floats, no tolerances.
"""

from __future__ import annotations

import re as _re
from typing import Iterable, List, Sequence, Tuple

from gmpy2 import mpq, mpz, isqrt

from .errors import BadInput, NotHermitian, ShapeMismatch, Singular

__all__ = [
    "GaussianRational",
    "gq",
    "ZERO",
    "ONE",
    "I",
    "ExactMatrix",
    "rref_rank_nullspace",
    "hermitian_inertia",
    "hermitian_diagonalize",
    "completion_basis",
]


class GaussianRational:
    """An element a + b*i of Q(i), with a, b exact rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", mpq(re))
        object.__setattr__(self, "im", mpq(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- field operations -------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        n = other.abs2_q()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, k: int):
        if k < 0:
            return (ONE / self) ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2_q(self) -> mpq:
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    def abs2(self) -> "GaussianRational":
        return GaussianRational(self.abs2_q())

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    # -- comparison & hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, mpq, GaussianRational)):
            other = _coerce(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def sort_key(self):
        """Total order key (lexicographic on (re, im)) for determinism."""
        return (self.re, self.im)

    # -- formatting --------------------------------------------------------

    def __repr__(self):
        return f"gq({self})"

    def __str__(self):
        if self.im == 0:
            return _fmt_q(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{_fmt_q(self.re)}{sign}{_fmt_q(abs(self.im))}i"

    def serialize(self) -> str:
        """Canonical string form: 'a/b' or 'a/b+c/di' (sign folded into c)."""
        if self.im == 0:
            return f"{self.re.numerator}/{self.re.denominator}"
        sign = "+" if self.im >= 0 else "-"
        im = abs(self.im)
        return (
            f"{self.re.numerator}/{self.re.denominator}"
            f"{sign}{im.numerator}/{im.denominator}i"
        )

    @staticmethod
    def parse(text: str) -> "GaussianRational":
        m = _re.fullmatch(
            r"\s*(-?\d+)(?:/(\d+))?(?:\s*([+-])\s*(\d+)(?:/(\d+))?i)?\s*", text
        )
        if not m:
            raise BadInput(f"cannot parse Gaussian rational: {text!r}")
        a, b, sign, c, d = m.groups()
        re_part = mpq(int(a), int(b) if b else 1)
        if sign is None:
            return GaussianRational(re_part)
        im_part = mpq(int(c), int(d) if d else 1)
        if sign == "-":
            im_part = -im_part
        return GaussianRational(re_part, im_part)

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def sqrt(self):
        """Exact square root in Q(i) if one exists, else None."""
        if self.is_zero():
            return GaussianRational(0)
        # (a+bi)^2 = re + im*i with a^2+b^2 = |self| ; need |self| rational square
        n2 = self.abs2_q()
        r = _rational_sqrt(n2)  # r = |self| if square
        if r is None:
            return None
        a2 = (r + self.re) / 2
        a = _rational_sqrt(a2)
        if a is None:
            return None
        if a != 0:
            b = self.im / (2 * a)
            cand = GaussianRational(a, b)
        else:
            b = _rational_sqrt((r - self.re) / 2)
            if b is None:
                return None
            cand = GaussianRational(0, b)
        return cand if cand * cand == self else None


def _fmt_q(q: mpq) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _rational_sqrt(q: mpq):
    """Exact square root of a nonnegative rational, or None."""
    if q < 0:
        return None
    num, den = mpz(q.numerator), mpz(q.denominator)
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return mpq(rn, rd)
    return None


def _coerce(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, mpq)):
        return GaussianRational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")


def gq(re=0, im=0) -> GaussianRational:
    """Convenience constructor; accepts ints, rationals, or 'a/b' strings."""
    if isinstance(re, str):
        if im:
            raise BadInput("string form carries both parts")
        return GaussianRational.parse(re)
    if isinstance(re, GaussianRational):
        if im:
            return re + GaussianRational(0, im)
        return re
    return GaussianRational(re, im)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


class ExactMatrix:
    """Immutable dense matrix over Q(i).  0 x k and k x 0 are legal."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Sequence[Sequence], rows=None, cols=None):
        rows_list: List[Tuple[GaussianRational, ...]] = []
        for row in data:
            rows_list.append(tuple(_coerce(x) for x in row))
        if rows is None:
            rows = len(rows_list)
        if cols is None:
            cols = len(rows_list[0]) if rows_list else 0
        for row in rows_list:
            if len(row) != cols:
                raise ShapeMismatch("ragged rows")
        if len(rows_list) != rows:
            raise ShapeMismatch("row count mismatch")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_data", tuple(rows_list))

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int) -> "ExactMatrix":
        return ExactMatrix([[ZERO] * cols for _ in range(rows)], rows, cols)

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix(
            [[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n, n
        )

    @staticmethod
    def from_function(rows: int, cols: int, f) -> "ExactMatrix":
        return ExactMatrix(
            [[f(i, j) for j in range(cols)] for i in range(rows)], rows, cols
        )

    @staticmethod
    def diag(values: Iterable) -> "ExactMatrix":
        vals = [_coerce(v) for v in values]
        n = len(vals)
        return ExactMatrix.from_function(
            n, n, lambda i, j: vals[i] if i == j else ZERO
        )

    @staticmethod
    def column(values: Iterable) -> "ExactMatrix":
        vals = [_coerce(v) for v in values]
        return ExactMatrix([[v] for v in vals], len(vals), 1)

    # -- access ------------------------------------------------------------

    def __getitem__(self, idx) -> GaussianRational:
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> Tuple[GaussianRational, ...]:
        return self._data[i]

    def rows_list(self) -> List[List[GaussianRational]]:
        return [list(r) for r in self._data]

    def submatrix(self, row_range, col_range) -> "ExactMatrix":
        ri = list(row_range)
        ci = list(col_range)
        return ExactMatrix(
            [[self._data[i][j] for j in ci] for i in ri], len(ri), len(ci)
        )

    def col(self, j: int) -> "ExactMatrix":
        return self.submatrix(range(self.rows), [j])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self._data for x in r)

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch(f"add {self.shape} vs {other.shape}")
        return ExactMatrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self._data, other._data)
            ],
            self.rows,
            self.cols,
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def __neg__(self) -> "ExactMatrix":
        return self.scale(GaussianRational(-1))

    def scale(self, c) -> "ExactMatrix":
        c = _coerce(c)
        return ExactMatrix(
            [[c * x for x in r] for r in self._data], self.rows, self.cols
        )

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"matmul {self.shape} vs {other.shape}")
        bt = list(zip(*other._data)) if other.rows else [()] * other.cols
        out = []
        for r in self._data:
            out_row = []
            for c in bt:
                s = ZERO
                for a, b in zip(r, c):
                    if not (a.is_zero() or b.is_zero()):
                        s = s + a * b
                out_row.append(s)
            out.append(out_row)
        return ExactMatrix(out, self.rows, other.cols)

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            return self.__matmul__(other)
        return self.scale(other)

    __rmul__ = scale

    def __pow__(self, k: int) -> "ExactMatrix":
        if not self.is_square():
            raise ShapeMismatch("power of non-square matrix")
        out = ExactMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.cols,
            self.rows,
        )

    def conj(self) -> "ExactMatrix":
        return ExactMatrix(
            [[x.conj() for x in r] for r in self._data], self.rows, self.cols
        )

    def conj_transpose(self) -> "ExactMatrix":
        return self.transpose().conj()

    def adj(self, kind: str) -> "ExactMatrix":
        """A^T for kind 'T', A^* for kind 'Star'."""
        if kind == "T":
            return self.transpose()
        if kind == "Star":
            return self.conj_transpose()
        raise BadInput(f"unknown kind {kind!r}")

    def trace(self) -> GaussianRational:
        return sum((self._data[i][i] for i in range(self.rows)), ZERO)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        body = "; ".join(
            "[" + ", ".join(str(x) for x in r) + "]" for r in self._data
        )
        return f"ExactMatrix({self.rows}x{self.cols}: {body})"

    # -- stacking ----------------------------------------------------------

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise ShapeMismatch("hstack row mismatch")
        return ExactMatrix(
            [list(r1) + list(r2) for r1, r2 in zip(self._data, other._data)],
            self.rows,
            self.cols + other.cols,
        )

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.cols:
            raise ShapeMismatch("vstack col mismatch")
        return ExactMatrix(
            self.rows_list() + other.rows_list(), self.rows + other.rows, self.cols
        )

    @staticmethod
    def block_diag(blocks: Sequence["ExactMatrix"]) -> "ExactMatrix":
        total_r = sum(b.rows for b in blocks)
        total_c = sum(b.cols for b in blocks)
        out = [[ZERO] * total_c for _ in range(total_r)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return ExactMatrix(out, total_r, total_c)

    # -- elimination-based operations --------------------------------------

    def rref(self):
        """Reduced row echelon form.  Returns (R, pivot_columns)."""
        m = self.rows_list()
        rows, cols = self.rows, self.cols
        pivots = []
        pr = 0
        for pc in range(cols):
            pivot_row = None
            for i in range(pr, rows):
                if not m[i][pc].is_zero():
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            m[pr], m[pivot_row] = m[pivot_row], m[pr]
            inv = ONE / m[pr][pc]
            m[pr] = [inv * x for x in m[pr]]
            for i in range(rows):
                if i != pr and not m[i][pc].is_zero():
                    f = m[i][pc]
                    m[i] = [a - f * b for a, b in zip(m[i], m[pr])]
            pivots.append(pc)
            pr += 1
            if pr == rows:
                break
        return ExactMatrix(m, rows, cols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> "ExactMatrix":
        """Columns form a basis of the right nullspace."""
        R, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in pivots]
        cols = []
        for f in free:
            v = [ZERO] * self.cols
            v[f] = ONE
            for pr, pc in enumerate(pivots):
                v[pc] = -R[pr, f]
            cols.append(v)
        if not cols:
            return ExactMatrix([[] for _ in range(self.cols)], self.cols, 0)
        return ExactMatrix(list(zip(*cols)), self.cols, len(cols))

    def det(self) -> GaussianRational:
        if not self.is_square():
            raise ShapeMismatch("determinant of non-square matrix")
        m = self.rows_list()
        n = self.rows
        d = ONE
        for c in range(n):
            piv = None
            for r in range(c, n):
                if not m[r][c].is_zero():
                    piv = r
                    break
            if piv is None:
                return ZERO
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = -d
            d = d * m[c][c]
            inv = ONE / m[c][c]
            for r in range(c + 1, n):
                if not m[r][c].is_zero():
                    f = m[r][c] * inv
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return d

    def is_nonsingular(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def inv(self) -> "ExactMatrix":
        if not self.is_square():
            raise ShapeMismatch("inverse of non-square matrix")
        n = self.rows
        aug = self.hstack(ExactMatrix.identity(n))
        R, pivots = aug.rref()
        if pivots != list(range(n)):
            raise Singular("matrix is singular")
        return R.submatrix(range(n), range(n, 2 * n))

    def solve(self, B: "ExactMatrix") -> "ExactMatrix":
        """Solve A X = B exactly (A square nonsingular)."""
        return self.inv() @ B

    def solve_general(self, B: "ExactMatrix"):
        """One solution of A X = B for full-column-rank consistency, or None."""
        n, k = self.cols, B.cols
        aug = self.hstack(B)
        R, pivots = aug.rref()
        if any(p >= n for p in pivots):
            return None
        X = [[ZERO] * k for _ in range(n)]
        for pr, pc in enumerate(pivots):
            for j in range(k):
                X[pc][j] = R[pr, n + j]
        return ExactMatrix(X, n, k)

    def charpoly(self) -> List[GaussianRational]:
        """Characteristic polynomial det(xI - A), coefficients by descending
        degree, leading coefficient 1.  Faddeev-LeVerrier."""
        if not self.is_square():
            raise ShapeMismatch("charpoly of non-square matrix")
        n = self.rows
        coeffs = [ONE]
        M = ExactMatrix.zeros(n, n)
        for k in range(1, n + 1):
            M = self @ M + ExactMatrix.identity(n).scale(coeffs[-1])
            c = (self @ M).trace() / GaussianRational(-k)
            coeffs.append(c)
        return coeffs


def rref_rank_nullspace(A: ExactMatrix):
    """(RREF, rank, right-nullspace basis); A @ N == 0 exactly."""
    R, pivots = A.rref()
    return R, len(pivots), A.nullspace()


def hermitian_diagonalize(A: ExactMatrix):
    """Exact congruence diagonalization of a Hermitian matrix.

    Returns (W, D) with W nonsingular, W^* A W = D, D diagonal with real
    rational entries.  Diagonal pivots are used when available; when the
    remaining diagonal is all zero, an off-diagonal entry is promoted with a
    hyperbolic combination (contributing a (+1, -1) pair to the inertia).
    """
    if not A.is_square():
        raise NotHermitian("not square")
    if A != A.conj_transpose():
        raise NotHermitian("matrix is not Hermitian")
    n = A.rows
    D = A.rows_list()
    W = ExactMatrix.identity(n).rows_list()  # columns tracked as rows of W^T? no:
    # W kept as a full matrix in row-major lists; column ops applied directly.

    def col_op(dst, src, f):
        # column dst += f * column src (on D), paired row op with conj(f);
        # record on W columns.
        fc = f.conj()
        for i in range(n):
            D[i][dst] = D[i][dst] + f * D[i][src]
        for j in range(n):
            D[dst][j] = D[dst][j] + fc * D[src][j]
        for i in range(n):
            W[i][dst] = W[i][dst] + f * W[i][src]

    def col_swap(a, b):
        for i in range(n):
            D[i][a], D[i][b] = D[i][b], D[i][a]
        for j in range(n):
            D[a][j], D[b][j] = D[b][j], D[a][j]
        for i in range(n):
            W[i][a], W[i][b] = W[i][b], W[i][a]

    for i in range(n):
        piv = None
        for j in range(i, n):
            if not D[j][j].is_zero():
                piv = j
                break
        if piv is None:
            off = None
            for j in range(i, n):
                for k in range(j + 1, n):
                    if not D[j][k].is_zero():
                        off = (j, k)
                        break
                if off:
                    break
            if off is None:
                break  # remaining block identically zero
            j, k = off
            col_op(j, k, ONE / D[j][k])  # D[j][j] becomes 2
            piv = j
        if piv != i:
            col_swap(i, piv)
        d = D[i][i]
        for r in range(i + 1, n):
            if not D[i][r].is_zero():
                col_op(r, i, -D[i][r] / d)
    return ExactMatrix(W, n, n), ExactMatrix(D, n, n)


def hermitian_inertia(A: ExactMatrix):
    """Sylvester inertia (n_plus, n_minus, n_zero) of a Hermitian matrix."""
    _, D = hermitian_diagonalize(A)
    n_plus = n_minus = n_zero = 0
    for i in range(A.rows):
        d = D[i, i]
        if not d.is_real():
            raise NotHermitian("non-real diagonal after congruence")
        if d.re > 0:
            n_plus += 1
        elif d.re < 0:
            n_minus += 1
        else:
            n_zero += 1
    return n_plus, n_minus, n_zero


def completion_basis(Y1: ExactMatrix, P: ExactMatrix) -> ExactMatrix:
    """Y2 with P @ Y2 = 0 and [Y1 | Y2] nonsingular, given P @ Y1 nonsingular.

    Y1 is n x k, P is k x n, k < n; Y2's columns are a nullspace basis of P.
    """
    n, k = Y1.rows, Y1.cols
    if P.shape != (k, n):
        raise BadInput(f"shape mismatch: Y1 {Y1.shape}, P {P.shape}")
    if k >= n:
        raise BadInput("completion requires k < n")
    if not (P @ Y1).is_nonsingular():
        raise BadInput("P @ Y1 is singular")
    Y2 = P.nullspace()
    # rank(P) = k since P @ Y1 nonsingular, so Y2 has exactly n - k columns.
    return Y2

"""Constructive solvers for quadratic and Hermitian forms over Q(i).

The central problem: given a nonsingular symmetric / Hermitian /
skew-symmetric Gram matrix R, find an exact X taking R to its unit
canonical diagonal by congruence (X^T R X or X^* R X).  Existence over
Q(i) is a number-theoretic question, so the solvers are built on

* Gaussian-integer factorization (through the norm, splitting rational
  primes p = 1 mod 4 with a square root of -1),
* square roots modulo Gaussian primes (ramified, split and inert cases),
* Legendre-style descent for x^2 = a y^2 + b z^2 over Z[i], and
* rational two-squares decompositions for the Hermitian case.

Symmetric and Hermitian solvers return None when no transformation is
found (either none exists over Q(i), or the bounded searches missed it);
the skew-symmetric solver always succeeds.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations as _combinations
from math import gcd as _int_gcd
from typing import List, Optional, Tuple

from gmpy2 import isqrt, mpq, mpz
from sympy import factorint, isprime
from sympy.ntheory.factor_ import perfect_power, pollard_pm1, pollard_rho
from sympy.ntheory.residue_ntheory import sqrt_mod

from .errors import BadInput
from .exactmat import ExactMatrix, GaussianRational, ONE, ZERO, completion_basis, gq

__all__ = [
    "two_squares_rational",
    "represent_square",
    "binary_represent",
    "unit_congruence_sym",
    "unit_congruence_herm",
    "unit_congruence_skewsym",
]

# ---------------------------------------------------------------------------
# Gaussian integers as (re, im) pairs of Python ints.

GInt = Tuple[int, int]

_GZERO: GInt = (0, 0)
_GONE: GInt = (1, 0)


def _gadd(u: GInt, v: GInt) -> GInt:
    return (u[0] + v[0], u[1] + v[1])


def _gsub(u: GInt, v: GInt) -> GInt:
    return (u[0] - v[0], u[1] - v[1])


def _gneg(u: GInt) -> GInt:
    return (-u[0], -u[1])


def _gmul(u: GInt, v: GInt) -> GInt:
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _gconj(u: GInt) -> GInt:
    return (u[0], -u[1])


def _gnorm(u: GInt) -> int:
    return u[0] * u[0] + u[1] * u[1]


def _iround(a: int, n: int) -> int:
    """Nearest integer to a/n for n > 0, ties toward +inf."""
    return (2 * a + n) // (2 * n)


def _gdivmod(u: GInt, v: GInt) -> Tuple[GInt, GInt]:
    n = _gnorm(v)
    if n == 0:
        raise ZeroDivisionError("division by Gaussian zero")
    w = _gmul(u, _gconj(v))
    q = (_iround(w[0], n), _iround(w[1], n))
    return q, _gsub(u, _gmul(q, v))


def _gdiv(u: GInt, v: GInt) -> GInt:
    q, r = _gdivmod(u, v)
    if r != _GZERO:
        raise ArithmeticError("inexact Gaussian division")
    return q


def _ggcd(u: GInt, v: GInt) -> GInt:
    while v != _GZERO:
        u, v = v, _gdivmod(u, v)[1]
    return u


def _gbezout(u: GInt, v: GInt) -> Tuple[GInt, GInt, GInt]:
    """(g, s, t) with s*u + t*v = g = gcd(u, v)."""
    r0, r1 = u, v
    s0, s1 = _GONE, _GZERO
    t0, t1 = _GZERO, _GONE
    while r1 != _GZERO:
        q, r = _gdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _gsub(s0, _gmul(q, s1))
        t0, t1 = t1, _gsub(t0, _gmul(q, t1))
    return r0, s0, t0


def _gis_unit(u: GInt) -> bool:
    return _gnorm(u) == 1


def _gpow(u: GInt, e: int) -> GInt:
    out = _GONE
    for _ in range(e):
        out = _gmul(out, u)
    return out


def _gsqrt(u: GInt) -> Optional[GInt]:
    """Exact square root in Z[i] (square roots of Gaussian integers are
    Gaussian integers when they are rational over Q(i))."""
    s = GaussianRational(mpq(u[0]), mpq(u[1])).sqrt()
    if s is None:
        return None
    return (int(s.re), int(s.im))


def _to_gq(u: GInt) -> GaussianRational:
    return GaussianRational(mpq(u[0]), mpq(u[1]))


# ---------------------------------------------------------------------------
# Factorization and square roots modulo Gaussian primes.


def _split_prime(p: int) -> GInt:
    """A Gaussian prime of norm p, for rational prime p = 1 mod 4."""
    t = sqrt_mod(-1, p)
    pi = _ggcd((p, 0), (int(t), 1))
    if _gnorm(pi) != p:
        raise ArithmeticError(f"failed to split {p}")
    return pi


def _multiplicity(g: GInt, pi: GInt) -> Tuple[int, GInt]:
    k = 0
    while True:
        q, r = _gdivmod(g, pi)
        if r != _GZERO:
            return k, g
        g = q
        k += 1


class _FactorTooBig(ArithmeticError):
    """Raised when an integer resists the bounded factorization effort."""


# Shared effort meter: the unit-congruence solvers grant themselves a fixed
# number of factorization calls per top-level invocation so that a run of
# unlucky large descents degrades to None instead of taking minutes.
_effort_left = [10**9]


def _spend_effort():
    _effort_left[0] -= 1
    if _effort_left[0] < 0:
        raise _FactorTooBig("factorization effort budget exhausted")


@lru_cache(maxsize=1)
def _small_primes() -> Tuple[int, ...]:
    from sympy import sieve

    return tuple(sieve.primerange(2, 10**4))


def _int_factor_bounded(n: int) -> dict:
    """Full factorization of n > 0 with bounded effort.

    Numbers produced by the form solvers are usually smooth enough for
    trial division and Pollard rho; a genuinely hard semiprime would hang
    a complete method for hours, so after a fixed rho/p-1 budget we raise
    _FactorTooBig and let the caller's search move on.
    """
    _spend_effort()
    fac: dict = {}
    m = n
    for p in _small_primes():
        if p * p > m:
            break
        while m % p == 0:
            fac[p] = fac.get(p, 0) + 1
            m //= p
    pending = [(m, 1)]
    while pending:
        m, mult = pending.pop()
        m = int(m)
        if m == 1:
            continue
        if m < 10**14:
            for p, e in factorint(m).items():
                fac[int(p)] = fac.get(int(p), 0) + e * mult
            continue
        if m > 10**80:
            raise _FactorTooBig(f"{m.bit_length()}-bit number out of budget")
        if isprime(m):
            fac[m] = fac.get(m, 0) + mult
            continue
        pp = perfect_power(m)
        if pp:
            pending.append((int(pp[0]), mult * int(pp[1])))
            continue
        d = pollard_pm1(m, B=10000)
        if d is None:
            d = pollard_rho(m, retries=3, max_steps=2 * 10**5)
        if d is None or d in (1, m):
            raise _FactorTooBig(f"no factor of {m} within budget")
        pending.append((int(d), mult))
        pending.append((m // int(d), mult))
    return fac


def _gaussian_factor(g: GInt) -> Tuple[GInt, List[Tuple[GInt, int]]]:
    """g = unit * prod(pi^e); g nonzero."""
    if g == _GZERO:
        raise BadInput("factoring zero")
    fac: List[Tuple[GInt, int]] = []
    rest = g
    for p, e in _int_factor_bounded(_gnorm(g)).items():
        p = int(p)
        if p == 2:
            cands = [(1, 1)]
        elif p % 4 == 3:
            cands = [(p, 0)]
        else:
            pi = _split_prime(p)
            cands = [pi, _gconj(pi)]
        for pi in cands:
            k, rest = _multiplicity(rest, pi)
            if k:
                fac.append((pi, k))
    if not _gis_unit(rest):
        raise ArithmeticError("Gaussian factorization left a non-unit")
    return rest, fac


def _squarefree_split(g: GInt) -> Tuple[GInt, GInt]:
    """(s, f) with g = s * f^2 and s squarefree (times a unit)."""
    unit, fac = _gaussian_factor(g)
    s, f = unit, _GONE
    for pi, e in fac:
        if e % 2:
            s = _gmul(s, pi)
        f = _gmul(f, _gpow(pi, e // 2))
    return s, f


def _gmod(a: GInt, m: GInt) -> GInt:
    return _gdivmod(a, m)[1]


def _sqrt_mod_gprime(a: GInt, pi: GInt) -> Optional[GInt]:
    """Square root of a modulo a Gaussian prime pi, or None."""
    n = _gnorm(pi)
    if n == 2:  # ramified: residue field F_2, both residues are squares
        return _GZERO if (a[0] + a[1]) % 2 == 0 else _GONE
    p = pi[0] if pi[1] == 0 else n
    if pi[1] != 0 or pi[0] % 4 == 1:
        # split or already-rational prime of prime norm: residue field F_n
        # via i -> t with pi | (i - t).
        t = int(sqrt_mod(-1, n))
        if _gmod(_gsub((0, 1), (t, 0)), pi) != _GZERO:
            t = n - t
        r = (a[0] + a[1] * t) % n
        s = sqrt_mod(r, n)
        return None if s is None else (int(s), 0)
    # inert prime p = 3 mod 4: residue field F_{p^2} = F_p(i)
    u, v = a[0] % p, a[1] % p
    nrm = (u * u + v * v) % p
    s = sqrt_mod(nrm, p)
    if s is None:
        return None
    s = int(s)
    inv2 = pow(2, -1, p)
    for sg in (s, (-s) % p):
        x2 = ((u + sg) * inv2) % p
        x = sqrt_mod(x2, p)
        if x is None:
            continue
        x = int(x)
        if x == 0:
            y = sqrt_mod((-u) % p, p)
            if y is None:
                continue
            cand = (0, int(y))
        else:
            y = (v * pow(2 * x, -1, p)) % p
            cand = (x, int(y))
        sq = _gmul(cand, cand)
        if (sq[0] - a[0]) % p == 0 and (sq[1] - a[1]) % p == 0:
            return cand
    return None


def _sqrt_mod_gsquarefree(a: GInt, m: GInt) -> Optional[GInt]:
    """Square root of a modulo squarefree m by CRT over its prime factors."""
    _, fac = _gaussian_factor(m)
    root, mod = _GZERO, _GONE
    for pi, _e in fac:
        r = _sqrt_mod_gprime(_gmod(a, pi), pi)
        if r is None:
            return None
        g, s, t = _gbezout(mod, pi)
        if not _gis_unit(g):
            raise ArithmeticError("CRT moduli not coprime")
        # x = root * (t*pi)/g-part + r * (s*mod)/g-part, adjusted by unit g
        ginv_s = _gdiv(s, g)
        ginv_t = _gdiv(t, g)
        x = _gadd(_gmul(root, _gmul(ginv_t, pi)), _gmul(r, _gmul(ginv_s, mod)))
        mod = _gmul(mod, pi)
        root = _gmod(x, mod)
    return root


# ---------------------------------------------------------------------------
# Legendre descent: x^2 = a y^2 + b z^2 over Z[i].

_MAX_DESCENT = 200


def _verify_rep(sol: Tuple[GInt, GInt, GInt], a: GInt, b: GInt) -> bool:
    x, y, z = sol
    lhs = _gmul(x, x)
    rhs = _gadd(_gmul(a, _gmul(y, y)), _gmul(b, _gmul(z, z)))
    return lhs == rhs and (x, y, z) != (_GZERO, _GZERO, _GZERO)


@lru_cache(maxsize=4096)
def _brute_small(a: GInt, b: GInt, bound: int) -> Optional[Tuple[GInt, GInt, GInt]]:
    rng = range(-bound, bound + 1)
    for yr in rng:
        for yi in rng:
            y = (yr, yi)
            ay2 = _gmul(a, _gmul(y, y))
            for zr in rng:
                for zi in rng:
                    z = (zr, zi)
                    if y == _GZERO and z == _GZERO:
                        continue
                    w = _gadd(ay2, _gmul(b, _gmul(z, z)))
                    # quick norm test before the exact square root
                    n = _gnorm(w)
                    r = isqrt(mpz(n))
                    if r * r != n:
                        continue
                    x = _gsqrt(w)
                    if x is not None:
                        return (x, y, z)
    return None


def _represent_square_int(a: GInt, b: GInt, depth: int = 0):
    """Nontrivial (x, y, z) in Z[i]^3 with x^2 = a y^2 + b z^2, or None.
    a, b nonzero."""
    if depth > _MAX_DESCENT:
        return None
    sa, fa = _squarefree_split(a)
    sb, fb = _squarefree_split(b)
    if (sa, sb) != (a, b):
        rec = _represent_square_int(sa, sb, depth + 1)
        if rec is None:
            return None
        x, y, z = rec
        return (_gmul(x, _gmul(fa, fb)), _gmul(y, fb), _gmul(z, fa))
    ra = _gsqrt(a)
    if ra is not None:
        return (ra, _GONE, _GZERO)
    rb = _gsqrt(b)
    if rb is not None:
        return (rb, _GZERO, _GONE)
    if _gnorm(a) > _gnorm(b):
        rec = _represent_square_int(b, a, depth + 1)
        if rec is None:
            return None
        x, y, z = rec
        return (x, z, y)
    if _gnorm(b) <= 32:
        return _brute_small(a, b, 12)
    t = _sqrt_mod_gsquarefree(_gmod(a, b), b)
    if t is None:
        return None
    t = _gmod(t, b)
    b1 = _gdiv(_gsub(_gmul(t, t), a), b)
    if b1 == _GZERO:
        return None  # a = t^2 would have been caught as a square
    rec = _represent_square_int(a, b1, depth + 1)
    if rec is None:
        return None
    X, Y, Z = rec
    sol = (
        _gadd(_gmul(X, t), _gmul(a, Y)),
        _gadd(X, _gmul(t, Y)),
        _gmul(b1, Z),
    )
    g = _ggcd(_ggcd(sol[0], sol[1]), sol[2])
    if g != _GZERO and not _gis_unit(g):
        sol = (_gdiv(sol[0], g), _gdiv(sol[1], g), _gdiv(sol[2], g))
    if not _verify_rep(sol, a, b):
        raise ArithmeticError("descent produced an invalid representation")
    return sol


def _gq_int_scale(v: GaussianRational) -> int:
    """Smallest positive integer D with D*v in Z[i]."""
    num = int(v.re.denominator)
    den = int(v.im.denominator)
    g = mpz(num) * den // _int_gcd(num, den)
    return int(g)


def _square_reduce(v: GaussianRational) -> Tuple[GInt, GaussianRational]:
    """(s, f) with v = s * f^2, s a squarefree Gaussian integer."""
    d = _gq_int_scale(v)
    g = v * gq(d * d)  # a Gaussian integer: (v*d) * d
    s, f0 = _squarefree_split((int(g.re), int(g.im)))
    return s, _to_gq(f0) / gq(d)


def represent_square(a: GaussianRational, b: GaussianRational):
    """Nontrivial (x, y, z) in Q(i)^3 with x^2 = a y^2 + b z^2, or None."""
    a, b = gq(a), gq(b)
    if a.is_zero() or b.is_zero():
        raise BadInput("coefficients must be nonzero")
    # Stripping square parts first keeps the descent (and its
    # factorizations) at the intrinsic size of the problem.
    try:
        sa, fa = _square_reduce(a)
        sb, fb = _square_reduce(b)
        rec = _represent_square_int(sa, sb)
    except _FactorTooBig:
        return None
    if rec is None:
        return None
    X, Y, Z = rec
    x = _to_gq(X)
    y = _to_gq(Y) / fa
    z = _to_gq(Z) / fb
    assert x * x == a * y * y + b * z * z
    return x, y, z


def binary_represent(d1: GaussianRational, d2: GaussianRational, w: GaussianRational):
    """(x, y) in Q(i)^2 with d1 x^2 + d2 y^2 = w (w nonzero), or None."""
    d1, d2, w = gq(d1), gq(d2), gq(w)
    if d1.is_zero() or d2.is_zero() or w.is_zero():
        raise BadInput("coefficients and target must be nonzero")
    c = (d1 * d2).sqrt()
    if c is not None:
        # Square discriminant: the form is hyperbolic (i^2 = -1 makes
        # (1, ic/d2) isotropic), so it represents everything explicitly.
        beta = w / (gq(4) * d1)
        x = ONE + beta
        y = (gq(0, 1) * c / d2) * (ONE - beta)
        assert d1 * x * x + d2 * y * y == w
        return x, y
    rep = represent_square(-(d1 * d2), d1 * w)
    if rep is None:
        return None
    X, Y, Z = rep
    if Z.is_zero():
        # X^2 = -(d1 d2) Y^2 would force d1 d2 square, handled above
        raise ArithmeticError("unexpected isotropic representation")
    x, y = X / (d1 * Z), Y / Z
    assert d1 * x * x + d2 * y * y == w
    return x, y


# ---------------------------------------------------------------------------
# Exact two-squares machinery for the Hermitian case.


def _two_squares_int(n: int) -> Optional[GInt]:
    """z in Z[i] with |z|^2 = n (n > 0), or None."""
    if n <= 0:
        return None
    z = _GONE
    try:
        fac = _int_factor_bounded(n)
    except _FactorTooBig:
        return None
    for p, e in fac.items():
        p = int(p)
        if p % 4 == 3:
            if e % 2:
                return None
            z = _gmul(z, _gpow((p, 0), e // 2))
        elif p == 2:
            z = _gmul(z, _gpow((1, 1), e))
        else:
            z = _gmul(z, _gpow(_split_prime(p), e))
    return z


def two_squares_rational(q) -> Optional[GaussianRational]:
    """alpha in Q(i) with |alpha|^2 = q (q a positive rational), or None."""
    q = mpq(q)
    if q <= 0:
        return None
    num, den = int(q.numerator), int(q.denominator)
    z = _two_squares_int(num * den)
    if z is None:
        return None
    return GaussianRational(mpq(z[0], den), mpq(z[1], den))


def _two_square_combo(d1, d2, s: int, budget: int = 60):
    """(alpha, beta) in Q(i)^2 with |alpha|^2 d1 + |beta|^2 d2 = s, where
    d1, d2 are nonzero rationals and s is +-1.  None if the bounded search
    misses."""
    d1, d2 = mpq(d1), mpq(d2)
    # candidate |alpha|^2 values: small two-square rationals
    cands = [mpq(0)]
    smalls = [n for n in range(1, budget) if _two_squares_int(n) is not None]
    for den in (1, 2, 4, 5, 8, 9, 10, 13, 16, 18, 20, 25):
        for n in smalls:
            cands.append(mpq(n, den))
    # scale-adapted candidates: n / 2^j stays a two-square for any j, so
    # bring it near |s/d1| where the d1 q1 term can actually cancel
    bound = abs(mpq(s) / d1)
    if bound < 1:
        for n in smalls[:20]:
            q = mpq(n)
            while q > bound:
                q = q / 2
            cands.extend([q, 2 * q, 4 * q])
    for q1 in cands:
        q2 = (s - d1 * q1) / d2
        if q2 < 0:
            continue
        beta = two_squares_rational(q2) if q2 > 0 else ZERO
        if beta is None:
            continue
        alpha = two_squares_rational(q1) if q1 > 0 else ZERO
        if alpha is None:
            continue
        return alpha, beta
    return None


# ---------------------------------------------------------------------------
# Congruence diagonalization (T-symmetric variant) and the unit solvers.


def _normalize_columns(M: ExactMatrix) -> ExactMatrix:
    """Rescale each column to coprime Gaussian-integer entries.

    Column scaling only multiplies the induced Gram diagonal by squares,
    which every caller tolerates; without it the peel loops accumulate
    astronomically large rationals and the factorizations blow up.
    """
    cols = []
    for j in range(M.cols):
        entries = [M[i, j] for i in range(M.rows)]
        lcm = 1
        for e in entries:
            for den in (int(e.re.denominator), int(e.im.denominator)):
                lcm = lcm * den // _int_gcd(lcm, den)
        scaled = [e * gq(lcm) for e in entries]
        g = _GZERO
        for e in scaled:
            g = _ggcd(g, (int(e.re), int(e.im)))
        if g != _GZERO and not _gis_unit(g):
            ginv = ONE / _to_gq(g)
            scaled = [e * ginv for e in scaled]
        cols.append(scaled)
    return ExactMatrix([[cols[j][i] for j in range(M.cols)]
                        for i in range(M.rows)], M.rows, M.cols)


def _sym_diagonalize(A: ExactMatrix):
    """(W, D) with W^T A W = D diagonal, for complex symmetric A."""
    if not A.is_square() or A != A.transpose():
        raise BadInput("matrix is not symmetric")
    n = A.rows
    D = A.rows_list()
    W = ExactMatrix.identity(n).rows_list()

    def col_op(dst, src, f):
        for i in range(n):
            D[i][dst] = D[i][dst] + f * D[i][src]
        for j in range(n):
            D[dst][j] = D[dst][j] + f * D[src][j]
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
        # smallest nonzero pivot keeps the eliminated entries from blowing up
        piv = None
        best = None
        for j in range(i, n):
            if not D[j][j].is_zero():
                nrm = D[j][j].abs2_q()
                if best is None or nrm < best:
                    best = nrm
                    piv = j
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
                break
            j, k = off
            col_op(j, k, ONE / D[j][k])
            piv = j
        if piv != i:
            col_swap(i, piv)
        d = D[i][i]
        for r in range(i + 1, n):
            if not D[i][r].is_zero():
                col_op(r, i, -D[i][r] / d)
    return ExactMatrix(W, n, n), ExactMatrix(D, n, n)


_SMALL_GAUSSIANS = [
    gq(1), gq(2), gq(0, 1), gq(1, 1), gq(-1), gq(1, -1), gq(3), gq(2, 1),
    gq(2, -1), gq("1/2"), gq(0, 2), gq(3, 1), gq(-2), gq("3/2"), gq(0, -1),
    gq(1, 2), gq(4), gq(5), gq("1/3"), gq(2, 2),
]


def _isotropic_to_one(diag, support, vec):
    """Given sum(diag[s] vec_s^2) = 0 over `support` with vec nonzero,
    build u with sum(diag[i] u_i^2) = 1.

    An isotropic vector spans a hyperbolic plane with any non-orthogonal
    direction, and a hyperbolic plane represents everything: with
    beta = B(v, e_m) != 0, the vector alpha*v + e_m has value
    2*alpha*beta + d_m, so alpha = (1 - d_m) / (2*beta).
    """
    m = len(diag)
    pos = next(p for p, s in enumerate(support) if not vec[p].is_zero())
    m0 = support[pos]
    beta = diag[m0] * vec[pos]
    alpha = (ONE - diag[m0]) / (beta + beta)
    u = [ZERO] * m
    for p, s in enumerate(support):
        u[s] = alpha * vec[p]
    u[m0] = u[m0] + ONE
    return u


def _sym_represent_one(diag: List[GaussianRational]):
    """Coefficient vector u with sum(diag[i] u_i^2) = 1, or None.

    Singles and pairs are decided exactly (descent is complete for binary
    forms); larger supports go through an isotropic vector, which makes
    the form universal.  A form congruent to the identity is isotropic in
    dimension >= 2, so the search below only fails on forms that are not
    unit-congruent or on rare anisotropic-subform layouts.
    """
    m = len(diag)
    for i in range(m):
        s = (ONE / diag[i]).sqrt()
        if s is not None:
            u = [ZERO] * m
            u[i] = s
            return u
    for i in range(m):
        for j in range(i + 1, m):
            rep = binary_represent(diag[i], diag[j], ONE)
            if rep is not None:
                u = [ZERO] * m
                u[i], u[j] = rep
                return u
    # ternary isotropic vectors: d_i x^2 + d_j y^2 + d_l z^2 = 0 via descent
    for i in range(m):
        for j in range(i + 1, m):
            for l in range(j + 1, m):
                sol = represent_square(-diag[j] / diag[i], -diag[l] / diag[i])
                if sol is not None:
                    return _isotropic_to_one(diag, [i, j, l], list(sol))
    # four-coordinate isotropy: a common value of two binary subforms
    iota = gq(0, 1)
    sweep = [(gq(1), gq(0)), (gq(0), gq(1))] + [
        (gq(1), s) for s in _SMALL_GAUSSIANS[:10]
    ]
    for quad in _combinations(range(m), 4):
        for half in ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)):
            i, j, l, l2 = (quad[h] for h in half)
            for rho, sigma in sweep:
                t = diag[i] * rho * rho + diag[j] * sigma * sigma
                if t.is_zero():
                    return _isotropic_to_one(diag, [i, j], [rho, sigma])
                rep = binary_represent(diag[l], diag[l2], t)
                if rep is not None:
                    y, z = rep
                    return _isotropic_to_one(
                        diag, [i, j, l, l2], [rho, sigma, iota * y, iota * z]
                    )
    # last resort: peel one small coordinate and retry a pair
    for l in range(m):
        for sigma in _SMALL_GAUSSIANS:
            target = ONE - diag[l] * sigma * sigma
            if target.is_zero():
                continue
            for i in range(m):
                for j in range(i + 1, m):
                    if l in (i, j):
                        continue
                    rep = binary_represent(diag[i], diag[j], target)
                    if rep is not None:
                        u = [ZERO] * m
                        u[i], u[j] = rep
                        u[l] = sigma
                        return u
    return None


_RETRY_UNITS = [gq(1), gq(-1), gq(0, 1), gq(0, -1)]


def _random_unimodular(k: int, seed: int) -> ExactMatrix:
    """Small unimodular basis change: a product of unit shears."""
    import random as _random

    rng = _random.Random(seed)
    T = ExactMatrix.identity(k).rows_list()
    for _ in range(2 * k):
        i, j = rng.sample(range(k), 2)
        c = _RETRY_UNITS[rng.randrange(4)]
        for r in range(k):
            T[r][j] = T[r][j] + c * T[r][i]
    return ExactMatrix(T, k, k)


def unit_congruence_sym(R: ExactMatrix) -> Optional[ExactMatrix]:
    """X with X^T R X = I for nonsingular complex symmetric R, or None.

    The diagonal produced by a single elimination order can be unluckily
    out of reach of the bounded number-theoretic searches, so failures are
    retried under a few deterministic small basis changes.
    """
    k = R.rows
    if k == 0:
        return ExactMatrix.zeros(0, 0)
    # det(X^T R X) = det(X)^2 det(R), so det(R) must be a square in Q(i)
    if R.det().sqrt() is None:
        return None
    _effort_left[0] = 1500
    try:
        X = _unit_congruence_sym_once(R)
        for attempt in range(8):
            if X is not None:
                return X
            T = _random_unimodular(k, 1009 + attempt)
            inner = _unit_congruence_sym_once(T.transpose() @ R @ T)
            X = None if inner is None else T @ inner
        return X
    finally:
        _effort_left[0] = 10**9


def _unit_congruence_sym_once(R: ExactMatrix) -> Optional[ExactMatrix]:
    k = R.rows
    basis = ExactMatrix.identity(k)
    cols: List[ExactMatrix] = []
    while basis.cols:
        G = basis.transpose() @ R @ basis
        W, _ = _sym_diagonalize(G)
        W = _normalize_columns(W)
        D = W.transpose() @ G @ W
        diag = [D[i, i] for i in range(D.rows)]
        u = _sym_represent_one(diag)
        if u is None:
            return None
        u_vec = W @ ExactMatrix.column(u)
        col = basis @ u_vec
        cols.append(col)
        if basis.cols == 1:
            break
        # complement of u under the bilinear form of G
        row = (u_vec.transpose() @ G)
        comp = completion_basis(u_vec, row)
        basis = _normalize_columns(basis @ comp)
    X = cols[0]
    for c in cols[1:]:
        X = X.hstack(c)
    if (X.transpose() @ R @ X) != ExactMatrix.identity(k):
        raise ArithmeticError("symmetric unit congruence failed verification")
    return X


def _independent_columns(B: ExactMatrix, r: int):
    """Indices of r linearly independent columns of B, or None."""
    chosen: List[int] = []
    for j in range(B.cols):
        cand = chosen + [j]
        if B.submatrix(range(B.rows), cand).rank() == len(cand):
            chosen = cand
            if len(chosen) == r:
                return chosen
    return None


@lru_cache(maxsize=65536)
def _norm_value(n: int):
    """z with |z|^2 = n for small n >= 0, else None (0 allowed).

    Cached, so it must not depend on the shared effort meter: a None here
    is a proof of non-representability, never a timeout.
    """
    if n < 0:
        return None
    if n == 0:
        return _GZERO
    if n > 10**9:
        return None
    z = _GONE
    for p, e in factorint(n).items():
        p = int(p)
        if p % 4 == 3:
            if e % 2:
                return None
            z = _gmul(z, _gpow((p, 0), e // 2))
        elif p == 2:
            z = _gmul(z, _gpow((1, 1), e))
        else:
            z = _gmul(z, _gpow(_split_prime(p), e))
    return z


def _definite_norm_rep(ds: List[mpq], cmax: int, step_cap: int = 4000):
    """alphas in Q(i) with sum(ds[i] |alpha_i|^2) = 1 for positive rational
    ds, or None.

    Writes alpha_i = z_i / c over a common denominator and enumerates the
    two-square integer values |z_i|^2; the definite case keeps the ranges
    finite, which is exactly the case sign-mixing searches cannot reach.
    """
    m = 1
    for d in ds:
        den = int(d.denominator)
        m = m * den // _int_gcd(m, den)
    A = [int(d * m) for d in ds]
    if max(A) > 10**7:
        return None

    def split(coeffs, rhs):
        if not coeffs:
            return [] if rhs == 0 else None
        if len(coeffs) == 1:
            if rhs % coeffs[0]:
                return None
            q = rhs // coeffs[0]
            return [q] if _norm_value(q) is not None else None
        if rhs // coeffs[0] > step_cap:
            return None
        for N in range(rhs // coeffs[0] + 1):
            if _norm_value(N) is None:
                continue
            rest = split(coeffs[1:], rhs - coeffs[0] * N)
            if rest is not None:
                return [N] + rest
        return None

    for c in range(1, cmax + 1):
        rec = split(A, m * c * c)
        if rec is not None:
            return [
                _to_gq(_norm_value(N)) / gq(c) for N in rec
            ]
    return None


def unit_congruence_herm(R: ExactMatrix):
    """(X, n_plus, n_minus) with X^* R X = diag(I, -I) for nonsingular
    Hermitian R; X is None when the bounded searches fail.

    The signature (n_plus, n_minus) is always computed; for the
    transformation itself, a greedy extraction can strand an unrepresentable
    leftover, so failed attempts are retried under small basis changes.
    """
    _effort_left[0] = 1500
    try:
        X, n_plus, n_minus = _unit_congruence_herm_once(R)
        for attempt in range(8):
            if X is not None:
                break
            T = _random_unimodular(R.rows, 2161 + attempt)
            inner, _, _ = _unit_congruence_herm_once(T.conj_transpose() @ R @ T)
            X = None if inner is None else T @ inner
    finally:
        _effort_left[0] = 10**9
    if X is not None:
        expect = ExactMatrix.diag([gq(1)] * n_plus + [gq(-1)] * n_minus)
        if (X.conj_transpose() @ R @ X) != expect:
            raise ArithmeticError("Hermitian unit congruence failed verification")
    return X, n_plus, n_minus


def _unit_congruence_herm_once(R: ExactMatrix):
    from .exactmat import hermitian_diagonalize

    k = R.rows
    if k == 0:
        return ExactMatrix.zeros(0, 0), 0, 0
    W, _ = hermitian_diagonalize(R)
    W = _normalize_columns(W)
    D = W.conj_transpose() @ R @ W
    entries: List[Tuple[mpq, ExactMatrix]] = []
    for i in range(k):
        entries.append((D[i, i].re, W.submatrix(range(k), [i])))
    n_plus = sum(1 for d, _ in entries if d > 0)
    n_minus = k - n_plus

    def extract(target: int):
        """Pull a vector of squared length `target` (+1/-1) out of
        `entries`, Gram-reducing the leftovers."""
        # single entries first
        for idx, (d, v) in enumerate(entries):
            if (target > 0) != (d > 0):
                continue
            alpha = two_squares_rational(mpq(target) / d)
            if alpha is not None:
                entries.pop(idx)
                return v.scale(alpha)
        # pairs
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                di, vi = entries[i]
                dj, vj = entries[j]
                combo = _two_square_combo(di, dj, target)
                if combo is None:
                    continue
                alpha, beta = combo
                u = vi.scale(alpha) + vj.scale(beta)
                # leftover direction, R-orthogonal to u inside span(vi, vj)
                uRvi = (u.conj_transpose() @ R @ vi)[0, 0]
                uRvj = (u.conj_transpose() @ R @ vj)[0, 0]
                w = vj if uRvj.is_zero() else vi.scale(uRvj) - vj.scale(uRvi)
                w = _normalize_columns(w)
                dw = (w.conj_transpose() @ R @ w)[0, 0]
                if dw.is_zero() or not dw.is_real():
                    continue
                entries.pop(j)
                entries.pop(i)
                entries.append((dw.re, w))
                return u
        # definite subsets: all weights on the target's side, where
        # sign-mixing candidate sweeps cannot exist; enumerate two-square
        # values over a common denominator instead
        same = [idx for idx, (d, _) in enumerate(entries)
                if (d > 0) == (target > 0)]
        for size, cmax in ((2, 30), (3, 16), (4, 8)):
            if len(same) < size:
                continue
            for sub in _combinations(same, size):
                ds = [abs(entries[i][0]) for i in sub]
                rep = _definite_norm_rep(ds, cmax)
                if rep is None:
                    continue
                sel = [entries[i][1] for i in sub]
                u = sel[0].scale(rep[0])
                for v, alpha in zip(sel[1:], rep[1:]):
                    u = u + v.scale(alpha)
                t_inv = gq(target)  # target is +-1, its own inverse
                ws = []
                for v in sel:
                    g = (u.conj_transpose() @ R @ v)[0, 0]
                    ws.append(v - u.scale(g * t_inv))
                B = ws[0]
                for w_col in ws[1:]:
                    B = B.hstack(w_col)
                B = _normalize_columns(B)
                piv = _independent_columns(B, size - 1)
                if piv is None:
                    continue
                B = _normalize_columns(B.submatrix(range(B.rows), piv))
                G2 = B.conj_transpose() @ R @ B
                W2, _ = hermitian_diagonalize(G2)
                B2 = _normalize_columns(B @ W2)
                new_entries = []
                for col_idx in range(size - 1):
                    col = B2.submatrix(range(B2.rows), [col_idx])
                    dv = (col.conj_transpose() @ R @ col)[0, 0]
                    if dv.is_zero() or not dv.is_real():
                        break
                    new_entries.append((dv.re, col))
                if len(new_entries) != size - 1:
                    continue
                for idx in sorted(sub, reverse=True):
                    entries.pop(idx)
                entries.extend(new_entries)
                return u
        return None

    cols: List[ExactMatrix] = []
    for target in [1] * n_plus + [-1] * n_minus:
        u = extract(target)
        if u is None:
            return None, n_plus, n_minus
        cols.append(u)
    X = cols[0]
    for c in cols[1:]:
        X = X.hstack(c)
    expect = ExactMatrix.diag([gq(1)] * n_plus + [gq(-1)] * n_minus)
    if (X.conj_transpose() @ R @ X) != expect:
        raise ArithmeticError("Hermitian unit congruence failed verification")
    return X, n_plus, n_minus


def unit_congruence_skewsym(R: ExactMatrix) -> ExactMatrix:
    """X with X^T R X = blkdiag([[0,1],[-1,0]], ...) for nonsingular
    skew-symmetric R.  Always exact."""
    k = R.rows
    if k % 2:
        raise BadInput("nonsingular skew-symmetric matrices have even size")
    if k == 0:
        return ExactMatrix.zeros(0, 0)
    basis = ExactMatrix.identity(k)
    cols: List[ExactMatrix] = []
    while basis.cols:
        G = basis.transpose() @ R @ basis
        m = G.rows
        # u = e_0; v with u^T G v = 1
        j = next(jj for jj in range(m) if not G[0, jj].is_zero())
        u = ExactMatrix.column([ONE] + [ZERO] * (m - 1))
        v = ExactMatrix.column(
            [ONE / G[0, j] if t == j else ZERO for t in range(m)]
        )
        cols.append(basis @ u)
        cols.append(basis @ v)
        if m == 2:
            break
        rows = (u.transpose() @ G).vstack(v.transpose() @ G)
        comp = completion_basis(u.hstack(v), rows)
        basis = _normalize_columns(basis @ comp)
    X = cols[0]
    for c in cols[1:]:
        X = X.hstack(c)
    blocks = [ExactMatrix([[0, 1], [-1, 0]]) for _ in range(k // 2)]
    if (X.transpose() @ R @ X) != ExactMatrix.block_diag(blocks):
        raise ArithmeticError("skew-symmetric reduction failed verification")
    return X

"""Canonical blocks and canonical-structure descriptors.

Blocks: J_n(lambda) Jordan, Gamma_n, Delta_n, H_{2n}(mu), and the k x (k+1)
singular blocks F_k, G_k.  Unspecified entries are zero.

Structures describe congruence canonical forms as multisets:
  Type 0   J_p(0)
  Type I   Gamma_q            (T)      alpha * Delta_q, |alpha| = 1   (Star)
  Type II  H_{2m}(mu)         (T: mu != 0, mu != (-1)^{m+1}, mu ~ 1/mu;
                               Star: |mu| > 1)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .errors import BadParam, BadStructure
from .exactmat import ExactMatrix, GaussianRational, ONE, ZERO, I as IMAG, gq

__all__ = [
    "build_block",
    "CongruenceStructure",
    "PairCanonicalStructure",
    "StructuredPairForm",
    "realize_structure",
    "realize_structured_form",
    "normalize_structure",
    "t_mu_representative",
]


def build_block(kind: str, size: int, param: Optional[GaussianRational] = None) -> ExactMatrix:
    """Construct a canonical block.  H blocks have dimension 2*size."""
    if kind in ("J", "Gamma", "Delta", "H") and size < 1:
        raise BadParam(f"{kind} block needs size >= 1")
    if kind in ("F", "G") and size < 0:
        raise BadParam(f"{kind} block needs size >= 0")
    if kind == "J":
        if param is None:
            raise BadParam("J block needs an eigenvalue")
        lam = gq(param)
        return ExactMatrix.from_function(
            size, size,
            lambda i, j: lam if i == j else (ONE if j == i + 1 else ZERO),
        )
    if kind == "Gamma":
        m = [[ZERO] * size for _ in range(size)]
        for k in range(1, size + 1):
            m[size - k][k - 1] = gq((-1) ** (k + 1))
        for k in range(1, size):
            m[size - k][k] = gq((-1) ** (k + 1))
        return ExactMatrix(m)
    if kind == "Delta":
        m = [[ZERO] * size for _ in range(size)]
        for k in range(1, size + 1):
            m[size - k][k - 1] = ONE
        for k in range(1, size):
            m[size - k][k] = IMAG
        return ExactMatrix(m)
    if kind == "H":
        if param is None:
            raise BadParam("H block needs a parameter")
        mu = gq(param)
        if mu.is_zero():
            raise BadParam("H block with mu = 0 is not allowed")
        n = size
        top = ExactMatrix.zeros(n, n).hstack(ExactMatrix.identity(n))
        bot = build_block("J", n, mu).hstack(ExactMatrix.zeros(n, n))
        return top.vstack(bot)
    if kind == "F":
        return ExactMatrix.from_function(
            size, size + 1, lambda i, j: ONE if j == i + 1 else ZERO
        )
    if kind == "G":
        return ExactMatrix.from_function(
            size, size + 1, lambda i, j: ONE if j == i else ZERO
        )
    raise BadParam(f"unknown block kind {kind!r}")


@dataclass(frozen=True)
class CongruenceStructure:
    """Multiset description of a T- or *-congruence canonical form.

    type0: sizes p of J_p(0).
    typeI: T kind - sizes q of Gamma_q; Star kind - pairs (q, alpha).
    typeII: pairs (m, mu) for H_{2m}(mu).
    """

    kind: str  # "T" or "Star"
    type0: Tuple[int, ...] = ()
    typeI: Tuple = ()
    typeII: Tuple = ()

    @property
    def dimension(self) -> int:
        if self.kind == "T":
            ti = sum(self.typeI)
        else:
            ti = sum(q for q, _ in self.typeI)
        return sum(self.type0) + ti + 2 * sum(m for m, _ in self.typeII)

    def validate(self):
        if self.kind not in ("T", "Star"):
            raise BadStructure(f"unknown kind {self.kind!r}")
        for p in self.type0:
            if not isinstance(p, int) or p < 1:
                raise BadStructure(f"bad Type-0 size {p}")
        if self.kind == "T":
            for q in self.typeI:
                if not isinstance(q, int) or q < 1:
                    raise BadStructure(f"bad Type-I size {q}")
            for m, mu in self.typeII:
                if m < 1:
                    raise BadStructure(f"bad Type-II half-size {m}")
                mu = gq(mu)
                if mu.is_zero() or mu == gq((-1) ** (m + 1)):
                    raise BadParam(f"inadmissible T-kind mu for H_{2*m}: {mu}")
        else:
            for q, alpha in self.typeI:
                if q < 1:
                    raise BadStructure(f"bad Type-I size {q}")
                if gq(alpha).abs2_q() != 1:
                    raise BadParam(f"Type-I alpha must have |alpha| = 1, got {alpha}")
            for m, mu in self.typeII:
                if m < 1:
                    raise BadStructure(f"bad Type-II half-size {m}")
                if gq(mu).abs2_q() <= 1:
                    raise BadParam(f"Star-kind mu must have |mu| > 1, got {mu}")


@dataclass(frozen=True)
class PairCanonicalStructure:
    """A congruence structure of the product plus the nonsingular-side flag."""

    pivot: str  # "ENonsingular" or "QNonsingular"
    structure: CongruenceStructure

    def validate(self):
        if self.pivot not in ("ENonsingular", "QNonsingular"):
            raise BadStructure(f"unknown pivot {self.pivot!r}")
        self.structure.validate()


@dataclass(frozen=True)
class StructuredPairForm:
    """Block counts for structured products.

    flavor: SymT, SkewSymT, HermStar, SkewHermStar.
    n_plus / n_minus: counts of (1,1)/(1,-1) (Herm), (1,i)/(1,-i) (SkewHerm),
    (1,1) count (SymT, n_minus = 0), or (I_2, H_2(-1)) pair count (SkewSymT,
    stored in n_plus with n_minus = 0).
    a, b, c, d: nilpotent-pair counts of (1,0), (0,1), (0,0), and the 2x2
    block (G_1^T, F_1^T) + (G_0, F_0).
    """

    flavor: str
    n_plus: int = 0
    n_minus: int = 0
    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0

    @property
    def dimension(self) -> int:
        reg = self.n_plus + self.n_minus
        if self.flavor == "SkewSymT":
            reg = 2 * self.n_plus
        return reg + self.a + self.b + self.c + 2 * self.d

    @property
    def is_psd(self) -> bool:
        """No negative-sign regular blocks (for HermStar: E^* Q is positive
        semidefinite on the regular part)."""
        return self.n_minus == 0

    def validate(self):
        if self.flavor not in ("SymT", "SkewSymT", "HermStar", "SkewHermStar"):
            raise BadStructure(f"unknown flavor {self.flavor!r}")
        if min(self.n_plus, self.n_minus, self.a, self.b, self.c, self.d) < 0:
            raise BadStructure("negative block count")
        if self.flavor in ("SymT", "SkewSymT") and self.n_minus != 0:
            raise BadStructure(f"{self.flavor} uses only n_plus")


def t_mu_representative(mu: GaussianRational) -> GaussianRational:
    """Canonical member of {mu, 1/mu}: the one with |mu| > 1, ties broken by
    nonnegative imaginary then nonnegative real part."""
    mu = gq(mu)
    if mu.is_zero():
        raise BadParam("mu = 0 is not admissible")
    n = mu.abs2_q()
    if n > 1:
        return mu
    if n < 1:
        return ONE / mu
    # |mu| = 1: the other candidate is conj(mu)
    if mu.im < 0:
        return mu.conj()
    return mu  # nonnegative imaginary part wins; mu = +-1 is self-reciprocal


def _sorted_type0(type0):
    return tuple(sorted(type0, reverse=True))


def normalize_structure(s: CongruenceStructure) -> CongruenceStructure:
    """Canonical representative: mu normalized (T kind), summands sorted
    descending by size then by parameter order.  Idempotent."""
    if s.kind == "T":
        type2 = []
        for m, mu in s.typeII:
            rep = t_mu_representative(gq(mu))
            type2.append((m, rep))
        out = CongruenceStructure(
            kind="T",
            type0=_sorted_type0(s.type0),
            typeI=tuple(sorted(s.typeI, reverse=True)),
            typeII=tuple(
                sorted(type2, key=lambda t: (-t[0], t[1].sort_key()))
            ),
        )
    else:
        out = CongruenceStructure(
            kind="Star",
            type0=_sorted_type0(s.type0),
            typeI=tuple(
                sorted(
                    ((q, gq(a)) for q, a in s.typeI),
                    key=lambda t: (-t[0], t[1].sort_key()),
                )
            ),
            typeII=tuple(
                sorted(
                    ((m, gq(mu)) for m, mu in s.typeII),
                    key=lambda t: (-t[0], t[1].sort_key()),
                )
            ),
        )
    out.validate()
    return out


def _regular_blocks(s: CongruenceStructure):
    """Realization order for the regular part: Type II ascending mu, then
    Type I ascending size / alpha."""
    blocks = []
    for m, mu in sorted(
        s.typeII, key=lambda t: (gq(t[1]).sort_key(), t[0])
    ):
        blocks.append(("H", m, gq(mu)))
    if s.kind == "T":
        for q in sorted(s.typeI):
            blocks.append(("Gamma", q, None))
    else:
        for q, alpha in sorted(
            s.typeI, key=lambda t: (t[0], gq(t[1]).sort_key())
        ):
            blocks.append(("Delta", q, gq(alpha)))
    return blocks


def _realize_regular(s: CongruenceStructure) -> ExactMatrix:
    mats = []
    for kind, size, param in _regular_blocks(s):
        b = build_block(kind, size, param)
        if kind == "Delta":
            b = b.scale(param)
        mats.append(b)
    return ExactMatrix.block_diag(mats) if mats else ExactMatrix.zeros(0, 0)


def _antidiag(entries) -> ExactMatrix:
    vals = [gq(e) for e in entries]
    n = len(vals)
    return ExactMatrix.from_function(
        n, n, lambda i, j: vals[i] if j == n - 1 - i else ZERO
    )


def realize_structure(
    s: Union[CongruenceStructure, PairCanonicalStructure], variant: str = "Standard"
):
    """Assemble concrete matrices from a structure descriptor.

    CongruenceStructure -> one matrix (Type II, Type I, Type 0 order).
    PairCanonicalStructure -> (E, Q) per the pair canonical-form theorems;
    variant 'Alternate' (T pairs) swaps each regular sub-pair (I_k, Gamma_k)
    for (antidiag(1, ..., (-1)^{k+1}), J_k(1)) and (I_{2k}, H_{2k}(mu)) for
    (antidiag(1, ..., 1), J_k(mu) + I_k).
    """
    if variant not in ("Standard", "Alternate"):
        raise BadStructure(f"unknown variant {variant!r}")
    if isinstance(s, CongruenceStructure):
        if variant != "Standard":
            raise BadStructure("Alternate variant applies to pair structures")
        s.validate()
        reg = _realize_regular(s)
        zero_part = [build_block("J", p, ZERO) for p in _sorted_type0(s.type0)]
        return ExactMatrix.block_diag([reg] + zero_part)

    s.validate()
    cs = s.structure
    if variant == "Alternate" and cs.kind != "T":
        raise BadStructure("Alternate realization is defined for T kind only")
    e_blocks = []
    q_blocks = []
    for kind, size, param in _regular_blocks(cs):
        dim = 2 * size if kind == "H" else size
        block = build_block(kind, size, param)
        if kind == "Delta":
            block = block.scale(param)
        if variant == "Alternate":
            if kind == "Gamma":
                e_blocks.append(_antidiag([(-1) ** k for k in range(size)]))
                q_blocks.append(build_block("J", size, ONE))
                continue
            if kind == "H":
                e_blocks.append(_antidiag([1] * dim))
                q_blocks.append(
                    ExactMatrix.block_diag(
                        [build_block("J", size, param), ExactMatrix.identity(size)]
                    )
                )
                continue
        e_blocks.append(ExactMatrix.identity(dim))
        q_blocks.append(block)
    type0 = _sorted_type0(cs.type0)
    if s.pivot == "ENonsingular":
        for p in type0:
            e_blocks.append(ExactMatrix.identity(p))
            q_blocks.append(build_block("J", p, ZERO))
    else:
        v = sum(type0)
        for p in type0:
            e_blocks.append(build_block("J", p, ZERO).adj(cs.kind))
        if v:
            q_blocks.append(ExactMatrix.identity(v))
    E = ExactMatrix.block_diag(e_blocks) if e_blocks else ExactMatrix.zeros(0, 0)
    Q = ExactMatrix.block_diag(q_blocks) if q_blocks else ExactMatrix.zeros(0, 0)
    return E, Q


# canonical nilpotent 2x2 block: (G_1^T, F_1^T) + (G_0, F_0)
_NIL2_E = ExactMatrix([[1, 0], [0, 0]])
_NIL2_Q = ExactMatrix([[0, 0], [1, 0]])


def realize_structured_form(f: StructuredPairForm):
    """Concrete (E, Q) for a structured canonical form: regular 1x1 (or 2x2
    skew) blocks first, then (1,0) x a, (0,1) x b, (0,0) x c, and d copies of
    the nilpotent 2x2 block."""
    f.validate()
    e_blocks = []
    q_blocks = []
    one = ExactMatrix([[1]])
    zero = ExactMatrix([[0]])
    if f.flavor == "SymT":
        for _ in range(f.n_plus):
            e_blocks.append(one)
            q_blocks.append(one)
    elif f.flavor == "SkewSymT":
        for _ in range(f.n_plus):
            e_blocks.append(ExactMatrix.identity(2))
            q_blocks.append(build_block("H", 1, gq(-1)))
    elif f.flavor == "HermStar":
        for _ in range(f.n_plus):
            e_blocks.append(one)
            q_blocks.append(one)
        for _ in range(f.n_minus):
            e_blocks.append(one)
            q_blocks.append(ExactMatrix([[-1]]))
    else:  # SkewHermStar
        for _ in range(f.n_plus):
            e_blocks.append(one)
            q_blocks.append(ExactMatrix([[IMAG]]))
        for _ in range(f.n_minus):
            e_blocks.append(one)
            q_blocks.append(ExactMatrix([[-IMAG]]))
    for _ in range(f.a):
        e_blocks.append(one)
        q_blocks.append(zero)
    for _ in range(f.b):
        e_blocks.append(zero)
        q_blocks.append(one)
    for _ in range(f.c):
        e_blocks.append(zero)
        q_blocks.append(zero)
    for _ in range(f.d):
        e_blocks.append(_NIL2_E)
        q_blocks.append(_NIL2_Q)
    E = ExactMatrix.block_diag(e_blocks) if e_blocks else ExactMatrix.zeros(0, 0)
    Q = ExactMatrix.block_diag(q_blocks) if q_blocks else ExactMatrix.zeros(0, 0)
    return E, Q


def enumerate_structures(
    kind: str,
    max_dim: int,
    t_mus: Tuple[GaussianRational, ...] = (),
    star_mus: Tuple[GaussianRational, ...] = (),
    star_alphas: Tuple[GaussianRational, ...] = (),
):
    """All normalized congruence structures of dimension 1..max_dim whose
    Type-II parameters are drawn from the given sets (admissibility
    filtered) and, for Star, Type-I signs from star_alphas."""
    alphabet = []
    for p in range(1, max_dim + 1):
        alphabet.append((p, ("0", p)))
    for q in range(1, max_dim + 1):
        if kind == "T":
            alphabet.append((q, ("I", q, None)))
        else:
            for alpha in star_alphas:
                alphabet.append((q, ("I", q, gq(alpha))))
    for m in range(1, max_dim // 2 + 1):
        mus = t_mus if kind == "T" else star_mus
        for mu in mus:
            mu = gq(mu)
            if kind == "T" and (mu.is_zero() or mu == gq((-1) ** (m + 1))):
                continue
            alphabet.append((2 * m, ("II", m, mu)))

    seen = set()
    out = []

    def rec(start, budget, chosen):
        if chosen:
            type0 = tuple(b[1] for b in chosen if b[0] == "0")
            if kind == "T":
                type1 = tuple(b[1] for b in chosen if b[0] == "I")
            else:
                type1 = tuple((b[1], b[2]) for b in chosen if b[0] == "I")
            type2 = tuple((b[1], b[2]) for b in chosen if b[0] == "II")
            s = normalize_structure(
                CongruenceStructure(
                    kind=kind, type0=type0, typeI=type1, typeII=type2
                )
            )
            if s not in seen:
                seen.add(s)
                out.append(s)
        for idx in range(start, len(alphabet)):
            size, blk = alphabet[idx]
            if size <= budget:
                rec(idx, budget - size, chosen + [blk])

    rec(0, max_dim, [])
    return out

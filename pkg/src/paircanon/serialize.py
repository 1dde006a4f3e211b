"""JSON serialization for matrices, pairs, structures, and reports.

Scalars are printed as exact rational strings — "a/b" for real values and
"a/b+c/di" for complex ones, with positive denominators and reduced
fractions — so that files never contain floating point and parse-print is
the identity.  Structures carry explicit kind tags and sorted summands so
that diff-based golden tests are stable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import List, Tuple, Union

from gmpy2 import mpq

from .blocks import (
    CongruenceStructure,
    PairCanonicalStructure,
    StructuredPairForm,
    normalize_structure,
)
from .codim import CodimBreakdown
from .errors import BadInput
from .exactmat import ExactMatrix, GaussianRational, gq
from .oracle import LinearSystemNullity

SCHEMA_VERSION = "1"

_SCALAR_RE = re.compile(
    r"^(-?\d+)/(\d+)(?:\+(-?\d+)/(\d+)i)?$"
)


def format_scalar(g: GaussianRational) -> str:
    """Exact string form: "a/b" when the value is real, "a/b+c/di"
    otherwise (c may be negative)."""
    re_q = g.re
    im_q = g.im
    s = f"{re_q.numerator}/{re_q.denominator}"
    if im_q != 0:
        s += f"+{im_q.numerator}/{im_q.denominator}i"
    return s


def parse_scalar(s: str) -> GaussianRational:
    m = _SCALAR_RE.match(s)
    if m is None:
        raise BadInput(f"unparseable scalar {s!r}")
    a, b, c, d = m.groups()
    if int(b) == 0 or (d is not None and int(d) == 0):
        raise BadInput(f"zero denominator in scalar {s!r}")
    re_q = mpq(int(a), int(b))
    im_q = mpq(int(c), int(d)) if c is not None else mpq(0)
    return GaussianRational(re_q, im_q)


@dataclass(frozen=True)
class MatrixFile:
    """Row-major exact matrix payload; entries are scalar strings."""

    schema_version: str
    rows: int
    cols: int
    entries: Tuple[str, ...]

    def validate(self):
        if self.schema_version != SCHEMA_VERSION:
            raise BadInput(
                f"unsupported schema version {self.schema_version!r}"
            )
        if self.rows < 0 or self.cols < 0:
            raise BadInput("negative matrix dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise BadInput(
                f"entry count {len(self.entries)} does not match "
                f"{self.rows}x{self.cols}"
            )


def matrix_to_file(M: ExactMatrix) -> MatrixFile:
    entries = tuple(
        format_scalar(M[i, j]) for i in range(M.rows) for j in range(M.cols)
    )
    return MatrixFile(SCHEMA_VERSION, M.rows, M.cols, entries)


def file_to_matrix(f: MatrixFile) -> ExactMatrix:
    f.validate()
    vals = [parse_scalar(s) for s in f.entries]
    data = [
        vals[i * f.cols:(i + 1) * f.cols] for i in range(f.rows)
    ]
    return ExactMatrix(data, f.rows, f.cols)


def matrix_to_json(M: ExactMatrix) -> dict:
    f = matrix_to_file(M)
    return {
        "schema_version": f.schema_version,
        "rows": f.rows,
        "cols": f.cols,
        "entries": list(f.entries),
    }


def matrix_from_json(d: dict) -> ExactMatrix:
    try:
        f = MatrixFile(
            str(d["schema_version"]),
            int(d["rows"]),
            int(d["cols"]),
            tuple(d["entries"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise BadInput(f"malformed matrix payload: {exc}") from exc
    return file_to_matrix(f)


def pair_to_json(E: ExactMatrix, Q: ExactMatrix) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "E": matrix_to_json(E),
        "Q": matrix_to_json(Q),
    }


def pair_from_json(d: dict) -> Tuple[ExactMatrix, ExactMatrix]:
    try:
        e_payload, q_payload = d["E"], d["Q"]
    except (KeyError, TypeError) as exc:
        raise BadInput(f"malformed pair payload: {exc}") from exc
    return matrix_from_json(e_payload), matrix_from_json(q_payload)


# ---------------------------------------------------------------------------
# Structures.


def _param_str(v) -> str:
    return format_scalar(gq(v))


def structure_to_json(
    s: Union[CongruenceStructure, PairCanonicalStructure, StructuredPairForm]
) -> dict:
    if isinstance(s, PairCanonicalStructure):
        return {
            "schema_version": SCHEMA_VERSION,
            "structure_kind": "PairCanonicalStructure",
            "pivot": s.pivot,
            "structure": structure_to_json(s.structure),
        }
    if isinstance(s, StructuredPairForm):
        return {
            "schema_version": SCHEMA_VERSION,
            "structure_kind": "StructuredPairForm",
            "flavor": s.flavor,
            "n_plus": s.n_plus,
            "n_minus": s.n_minus,
            "a": s.a,
            "b": s.b,
            "c": s.c,
            "d": s.d,
        }
    s = normalize_structure(s)
    if s.kind == "T":
        type1 = [{"size": q} for q in s.typeI]
    else:
        type1 = [
            {"size": q, "alpha": _param_str(alpha)} for q, alpha in s.typeI
        ]
    return {
        "schema_version": SCHEMA_VERSION,
        "structure_kind": "CongruenceStructure",
        "kind": s.kind,
        "type0": list(s.type0),
        "typeI": type1,
        "typeII": [
            {"half_size": m, "mu": _param_str(mu)} for m, mu in s.typeII
        ],
    }


def structure_from_json(d: dict):
    try:
        tag = d["structure_kind"]
        if tag == "PairCanonicalStructure":
            return PairCanonicalStructure(
                pivot=d["pivot"],
                structure=structure_from_json(d["structure"]),
            )
        if tag == "StructuredPairForm":
            return StructuredPairForm(
                flavor=d["flavor"],
                n_plus=int(d["n_plus"]),
                n_minus=int(d["n_minus"]),
                a=int(d["a"]),
                b=int(d["b"]),
                c=int(d["c"]),
                d=int(d["d"]),
            )
        if tag == "CongruenceStructure":
            kind = d["kind"]
            if kind == "T":
                type1 = tuple(int(x["size"]) for x in d["typeI"])
            else:
                type1 = tuple(
                    (int(x["size"]), parse_scalar(x["alpha"]))
                    for x in d["typeI"]
                )
            s = CongruenceStructure(
                kind=kind,
                type0=tuple(int(p) for p in d["type0"]),
                typeI=type1,
                typeII=tuple(
                    (int(x["half_size"]), parse_scalar(x["mu"]))
                    for x in d["typeII"]
                ),
            )
            return normalize_structure(s)
    except (KeyError, TypeError, ValueError) as exc:
        raise BadInput(f"malformed structure payload: {exc}") from exc
    raise BadInput(f"unknown structure_kind {tag!r}")


# ---------------------------------------------------------------------------
# Reports.


def breakdown_to_json(b: CodimBreakdown) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": b.kind,
        "formula_profile": b.formula_profile,
        "c0": b.c0, "c1": b.c1, "c2": b.c2,
        "c00": b.c00, "c11": b.c11, "c22": b.c22,
        "c01": b.c01, "c02": b.c02, "c12": b.c12,
        "total": b.total,
    }


def nullity_to_json(n: LinearSystemNullity) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "real_dim": n.real_dim,
        "complex_dim": n.complex_dim,
        "unknown_shapes": [list(s) for s in n.unknown_shapes],
    }


def witness_to_json(w) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": w.kind,
        "v_unitary": bool(getattr(w, "v_unitary", False)),
        "U": matrix_to_json(w.U),
        "V": matrix_to_json(w.V),
    }


def dump_json(payload: dict) -> str:
    """Canonical text form: sorted keys, no trailing whitespace."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"

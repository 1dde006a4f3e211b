"""Command-line front end.

Subcommands: block, congruence-structure, pair-canonical, codim, oracle,
equiv, lagrangian, fuzz.  All output is JSON on stdout; errors are
machine-readable JSON on stderr.  Exit codes: 0 success, 1 mathematical
refusal, 2 I/O or parse error, 3 internal inconsistency.  No color is
ever emitted (NO_COLOR is honored vacuously).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .blocks import (
    CongruenceStructure,
    PairCanonicalStructure,
    build_block,
    realize_structure,
)
from .codim import codim_congruence, codim_pair
from .congruence import (
    DEFAULT,
    EXACT,
    EigenBackend,
    star_congruence_structure,
    t_congruence_structure,
)
from .errors import (
    BadInput,
    BadParam,
    BadStructure,
    BothSingular,
    EigenFailure,
    NotHermitian,
    NotOrthogonal,
    PairCanonError,
    ShapeMismatch,
    Singular,
    StructureInconsistent,
    ToleranceFailure,
    Unsupported,
)
from .fuzz import FLAVORS, FuzzConfig, run_fuzz
from .oracle import (
    interaction_nullity,
    nullity_congruence_system,
    nullity_pair_system,
)
from .pairs import (
    check_equivalence,
    is_lagrangian,
    pair_canonical,
    structured_pair_canonical,
)
from .serialize import (
    breakdown_to_json,
    dump_json,
    matrix_from_json,
    matrix_to_json,
    nullity_to_json,
    pair_from_json,
    parse_scalar,
    structure_from_json,
    structure_to_json,
    witness_to_json,
)

EXIT_OK = 0
EXIT_REFUSED = 1
EXIT_IO = 2
EXIT_INCONSISTENT = 3

_REFUSALS = (
    BothSingular,
    Unsupported,
    BadParam,
    BadStructure,
    NotOrthogonal,
    NotHermitian,
    Singular,
    EigenFailure,
    ShapeMismatch,
)
_INCONSISTENT = (StructureInconsistent, ToleranceFailure)


class _CliIOError(Exception):
    pass


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(
        json.dumps({"error": kind, "message": message}) + "\n"
    )
    return code


def _emit(payload: dict) -> int:
    sys.stdout.write(dump_json(payload))
    return EXIT_OK


def _kind_of(flag: str) -> str:
    return {"t": "T", "star": "Star"}[flag]


def _backend_of(flag: str) -> EigenBackend:
    return {"exact": EXACT, "auto": DEFAULT}[flag]


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _CliIOError(f"cannot read {path}: {exc}") from exc


def _write_json(path: str, payload: dict):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dump_json(payload))
    except OSError as exc:
        raise _CliIOError(f"cannot write {path}: {exc}") from exc


def _load_matrix(path: str):
    return matrix_from_json(_load_json(path))


def _load_pair(path: str):
    return pair_from_json(_load_json(path))


# ---------------------------------------------------------------------------
# Subcommand bodies.


def _cmd_block(args) -> int:
    param = parse_scalar(args.param) if args.param is not None else None
    M = build_block(args.type, args.size, param)
    return _emit(matrix_to_json(M))


def _cmd_congruence_structure(args) -> int:
    A = _load_matrix(args.matrix)
    kind = _kind_of(args.kind)
    backend = _backend_of(args.backend)
    if kind == "T":
        s = t_congruence_structure(A, backend)
    else:
        s = star_congruence_structure(A, backend)
    return _emit(structure_to_json(s))


def _cmd_pair_canonical(args) -> int:
    E, Q = _load_pair(args.pair)
    kind = _kind_of(args.kind)
    if E.is_nonsingular() or Q.is_nonsingular():
        s = pair_canonical(E, Q, kind, _backend_of(args.backend))
        if args.witness:
            return _fail(
                EXIT_REFUSED,
                "Unsupported",
                "witness emission is available only for structured "
                "(singular-singular) pairs",
            )
        return _emit(structure_to_json(s))
    form, witness = structured_pair_canonical(E, Q, kind)
    if args.witness:
        if witness is None:
            return _fail(
                EXIT_REFUSED,
                "Unsupported",
                "no exact witness: the regular part's unit congruence "
                "could not be constructed over Q(i)",
            )
        _write_json(args.witness, witness_to_json(witness))
    return _emit(structure_to_json(form))


def _profile_of(flag: str) -> str:
    return {"as-printed": "AsPrinted", "reconciled": "Reconciled"}[flag]


def _cmd_codim(args) -> int:
    profile = _profile_of(args.profile)
    if args.structure:
        s = structure_from_json(_load_json(args.structure))
    else:
        E, Q = _load_pair(args.pair)
        kind = _kind_of(args.kind)
        s = pair_canonical(E, Q, kind, EXACT)
    if isinstance(s, PairCanonicalStructure):
        b = codim_pair(s, profile)
    elif isinstance(s, CongruenceStructure):
        b = codim_congruence(s, profile)
    else:
        return _fail(
            EXIT_REFUSED,
            "Unsupported",
            "codim takes a congruence or pair canonical structure",
        )
    if args.check_oracle:
        if isinstance(s, PairCanonicalStructure):
            E, Q = realize_structure(s)
            nul = nullity_pair_system(E, Q, s.structure.kind)
        else:
            A = realize_structure(s)
            nul = nullity_congruence_system(A, s.kind)
        oracle_value = (
            nul.real_dim if b.kind.endswith("Star") else nul.complex_dim
        )
        if profile == "Reconciled" and oracle_value != b.total:
            return _fail(
                EXIT_INCONSISTENT,
                "OracleMismatch",
                f"reconciled formula total {b.total} disagrees with "
                f"oracle nullity {oracle_value}",
            )
        payload = breakdown_to_json(b)
        payload["oracle"] = oracle_value
        return _emit(payload)
    return _emit(breakdown_to_json(b))


def _cmd_oracle(args) -> int:
    kind = _kind_of(args.kind)
    if args.congruence:
        nul = nullity_congruence_system(_load_matrix(args.congruence), kind)
    elif args.pair:
        E, Q = _load_pair(args.pair)
        nul = nullity_pair_system(E, Q, kind)
    else:
        M = _load_matrix(args.interaction[0])
        N = _load_matrix(args.interaction[1])
        nul = interaction_nullity(M, N, kind)
    return _emit(nullity_to_json(nul))


def _cmd_equiv(args) -> int:
    E, Q = _load_pair(args.pair)
    E1, Q1 = _load_pair(args.pair2)
    kind = _kind_of(args.kind)
    eq = check_equivalence(E, Q, E1, Q1, kind, _backend_of(args.backend))
    return _emit({"equivalent": eq})


def _cmd_lagrangian(args) -> int:
    E, Q = _load_pair(args.pair)
    return _emit({"lagrangian": is_lagrangian(E, Q, _kind_of(args.kind))})


def _cmd_fuzz(args) -> int:
    cfg = FuzzConfig(
        seed=args.seed,
        trials=args.trials,
        max_dim=args.max_dim,
        kind=_kind_of(args.kind),
        entry_bound=args.entry_bound,
        flavor=args.flavor,
    )
    report = run_fuzz(cfg)
    sys.stdout.write(dump_json(report.to_json()))
    if report.mismatches:
        return _fail(
            EXIT_INCONSISTENT,
            "FuzzMismatch",
            f"{len(report.mismatches)} of {report.trials} trials failed "
            "to recover the planted structure",
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser.


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="paircanon",
        description=(
            "Exact canonical forms of matrix pairs under T-/*-equivalence, "
            "orbit codimensions, and brute-force verification oracles."
        ),
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_kind(sp):
        sp.add_argument("--kind", choices=("t", "star"), required=True)

    def add_backend(sp):
        sp.add_argument(
            "--backend",
            choices=("exact", "auto"),
            default="auto",
            help=(
                "eigenvalue backend: 'exact' refuses spectra outside Q(i); "
                "'auto' falls back to float clustering (tau = 1e-8)"
            ),
        )

    sp = sub.add_parser("block", help="emit a canonical block matrix")
    sp.add_argument(
        "--type", choices=("J", "Gamma", "Delta", "H", "F", "G"),
        required=True,
    )
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument(
        "--param", help="eigenvalue / parameter as an exact scalar string"
    )
    sp.set_defaults(fn=_cmd_block)

    sp = sub.add_parser(
        "congruence-structure",
        help="canonical congruence structure of one matrix",
    )
    sp.add_argument("--matrix", required=True)
    add_kind(sp)
    add_backend(sp)
    sp.set_defaults(fn=_cmd_congruence_structure)

    sp = sub.add_parser(
        "pair-canonical", help="canonical structure of a matrix pair"
    )
    sp.add_argument("--pair", required=True)
    add_kind(sp)
    add_backend(sp)
    sp.add_argument(
        "--witness",
        help="write the exact transformation witness to this file "
        "(structured pairs only)",
    )
    sp.set_defaults(fn=_cmd_pair_canonical)

    sp = sub.add_parser("codim", help="orbit codimension breakdown")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--structure", help="structure JSON file")
    g.add_argument("--pair", help="pair JSON file (structure is computed)")
    sp.add_argument("--kind", choices=("t", "star"))
    sp.add_argument(
        "--profile", choices=("as-printed", "reconciled"),
        default="as-printed",
    )
    sp.add_argument(
        "--check-oracle", action="store_true",
        help="realize the structure and cross-check against the oracle",
    )
    sp.set_defaults(fn=_cmd_codim)

    sp = sub.add_parser(
        "oracle", help="brute-force nullity of the defining linear systems"
    )
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--congruence", help="matrix file: congruence system")
    g.add_argument("--pair", help="pair file: pair equivalence system")
    g.add_argument(
        "--interaction", nargs=2, metavar=("M", "N"),
        help="two matrix files: coupled two-block system",
    )
    add_kind(sp)
    sp.set_defaults(fn=_cmd_oracle)

    sp = sub.add_parser("equiv", help="same-orbit test for two pairs")
    sp.add_argument("--pair", required=True)
    sp.add_argument("--pair2", required=True)
    add_kind(sp)
    add_backend(sp)
    sp.set_defaults(fn=_cmd_equiv)

    sp = sub.add_parser(
        "lagrangian", help="does [E; Q] span a Lagrangian subspace"
    )
    sp.add_argument("--pair", required=True)
    add_kind(sp)
    sp.set_defaults(fn=_cmd_lagrangian)

    sp = sub.add_parser("fuzz", help="seeded plant-and-recover fuzzing")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--max-dim", type=int, default=6)
    add_kind(sp)
    sp.add_argument(
        "--entry-bound", type=int, default=3,
        help="bound on numerators/denominators of scramble entries",
    )
    sp.add_argument(
        "--flavor", choices=FLAVORS, default=None,
        help="plant structured singular-singular pairs of this flavor",
    )
    sp.set_defaults(fn=_cmd_fuzz)
    return p


def execute_command(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code not in (0, None) else EXIT_OK
    if args.command == "codim" and args.pair and not args.kind:
        return _fail(EXIT_IO, "BadInput", "--kind is required with --pair")
    try:
        return args.fn(args)
    except _CliIOError as exc:
        return _fail(EXIT_IO, "IOError", str(exc))
    except BadInput as exc:
        return _fail(EXIT_IO, "BadInput", str(exc))
    except _INCONSISTENT as exc:
        return _fail(EXIT_INCONSISTENT, type(exc).__name__, str(exc))
    except _REFUSALS as exc:
        return _fail(EXIT_REFUSED, type(exc).__name__, str(exc))
    except PairCanonError as exc:
        return _fail(EXIT_REFUSED, type(exc).__name__, str(exc))


def main(argv: Optional[list] = None) -> int:
    return execute_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Exit codes: 0 success, 2 input validation failure, 3 cap exceeded,
4 internal verification failure (a bug signal, not bad input).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .errors import CapExceededError, ValidationError, VerificationError
from .field import DEFAULT_FIELD_CAP
from .io import (
    canonical_json,
    character_json,
    input_digest,
    load_algebra_file,
    load_module_file,
    module_json,
    subspace_json,
)
from .liealg import enumerate_diagonals, iso_classes, minimal_ideals
from .pipeline import (
    Caps,
    aclosed_criterion,
    faithful_irreducible,
    verify_module,
)
from .redenv import DEFAULT_ENV_CAP


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--input", required=True, help="algebra file (JSON)")
    sub.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    sub.add_argument(
        "--field-cap", type=int, default=DEFAULT_FIELD_CAP,
        help="largest permitted field order",
    )
    sub.add_argument(
        "--env-cap", type=int, default=DEFAULT_ENV_CAP,
        help="largest permitted reduced-enveloping-algebra dimension",
    )
    sub.add_argument(
        "--enum-cap", type=int, default=2**16,
        help="largest permitted enumeration (vectors, projective points)",
    )
    sub.add_argument("--output", help="write the report here instead of stdout")
    sub.add_argument("--format", choices=["json"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modlie",
        description="minimal-ideal analysis and faithful irreducible modules "
        "for Lie algebras over finite fields",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("analyze", "minimal ideals, socle, isomorphism classes, diagonals"),
        ("build-faithful", "construct a faithful irreducible module"),
        ("check-criterion", "evaluate the multiplicity bound r <= dim(A)"),
        ("verify", "re-verify a module file against an algebra"),
    ]:
        sub = subs.add_parser(name, help=helptext)
        _add_common(sub)
        if name == "verify":
            sub.add_argument("--module", required=True, help="module file (JSON)")
    return parser


def _caps(args) -> Caps:
    return Caps(field_cap=args.field_cap, env_cap=args.env_cap, enum_cap=args.enum_cap)


def cmd_analyze(args) -> dict:
    parsed = load_algebra_file(args.input, args.field_cap)
    L, pmap, labels = parsed
    ideals = minimal_ideals(L, args.enum_cap)
    classes = iso_classes(L, args.enum_cap)
    socle = None
    out_classes = []
    for cls in classes:
        entry = {
            "multiplicity": cls.multiplicity,
            "block_dim": cls.block_dim,
            "members": [subspace_json(S) for S in cls.members],
            "isotypic_dim": cls.isotypic.dim,
        }
        count = (L.field.order ** cls.multiplicity - 1) // (L.field.order - 1)
        if count <= args.enum_cap:
            entry["lambda_vectors"] = [
                {"lam": [int(v) for v in spec.lam], "diagonal": spec.is_diagonal}
                for spec in enumerate_diagonals(L, cls, args.enum_cap)
            ]
        out_classes.append(entry)
    abelian = [L.is_abelian_subspace(S) for S in ideals]
    socle_rows = [S for S, ab in zip(ideals, abelian) if ab]
    socle_space = L.subspace(
        [row for S in socle_rows for row in S.basis]
    )
    return {
        "input_digest": input_digest(parsed),
        "dim": L.dim,
        "minimal_ideals": [
            dict(subspace_json(S), abelian=ab) for S, ab in zip(ideals, abelian)
        ],
        "abelian_socle": subspace_json(socle_space),
        "iso_classes": out_classes,
        "center_dim": L.center().dim,
        "derived_dim": L.derived_subalgebra().dim,
    }


def cmd_build_faithful(args) -> dict:
    parsed = load_algebra_file(args.input, args.field_cap)
    L, pmap, _labels = parsed
    cert = faithful_irreducible(L, pmap, seed=args.seed, caps=_caps(args))
    return {
        "input_digest": input_digest(parsed),
        "module": module_json(cert.module),
        "kernel_dim": cert.kernel.dim,
        "irreducible": cert.irreducible,
        "minimal_ideals": [subspace_json(S) for S in cert.minimal_ideal_list],
        "minimal_ideals_nontrivial": cert.action_flags,
        "socle_character": character_json(cert.socle_char),
        "tensor_steps": cert.tensor_steps,
        "envelope_used": cert.envelope_used,
    }


def cmd_check_criterion(args) -> dict:
    parsed = load_algebra_file(args.input, args.field_cap)
    L, _pmap, _labels = parsed
    report = aclosed_criterion(L, enum_cap=args.enum_cap)
    return {
        "input_digest": input_digest(parsed),
        "classes": [
            {
                "multiplicity": e.multiplicity,
                "block_dim": e.block_dim,
                "pass": e.passed,
            }
            for e in report.entries
        ],
        "verdict": report.verdict,
        "caveat": report.caveat,
    }


def cmd_verify(args) -> dict:
    parsed = load_algebra_file(args.input, args.field_cap)
    L, _pmap, _labels = parsed
    V = load_module_file(args.module, L, args.field_cap)
    result = verify_module(L, V, enum_cap=args.enum_cap, seed=args.seed)
    result["input_digest"] = input_digest(parsed)
    result["module_dim"] = V.dim
    return result


_COMMANDS = {
    "analyze": cmd_analyze,
    "build-faithful": cmd_build_faithful,
    "check-criterion": cmd_check_criterion,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        result = _COMMANDS[args.command](args)
        code = 0
    except ValidationError as exc:
        _emit_error(args, str(exc), 2)
        return 2
    except CapExceededError as exc:
        _emit_error(args, str(exc), 3)
        return 3
    except VerificationError as exc:
        _emit_error(args, str(exc), 4)
        return 4
    report = {
        "command": args.command,
        "seed": args.seed,
        "caps": {
            "field_cap": args.field_cap,
            "env_cap": args.env_cap,
            "enum_cap": args.enum_cap,
        },
        "result": result,
        "timings": {"total_s": round(time.perf_counter() - t0, 6)},
    }
    _write(args, canonical_json(report))
    return code


def _emit_error(args, message: str, code: int):
    payload = {
        "command": args.command,
        "error": message,
        "exit_code": code,
    }
    _write(args, canonical_json(payload))


def _write(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    sys.exit(main())

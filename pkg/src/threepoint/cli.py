"""Command-line front end.

Every subcommand prints plain text by default and JSON with ``--json``.
Rationals are always written as ``p/q`` strings.  Output contains no run
metadata unless ``--meta`` is given, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import datetime
import json
import platform
import sys
from typing import Any, Sequence

from . import __version__
from .exact_arith import format_rational
from .feasibility import (
    ADMISSIBLE,
    SCHEMA_VERSION,
    admissible_oriented_dims,
    dim8_unitary_solve,
    kosniowski_parity_search,
    oriented_filter,
    spin_filter,
    verify_theorem,
    unitary_dimension_report,
)
from .genus_coefficients import GENERA, FlavorMismatch, coefficient_table
from .localization import (
    UNITARY,
    DegreeMismatch,
    ModelError,
    chi_y,
    class_from_spec,
    integrate,
    load_model,
    residue_consistency,
    signature_of,
)


class CliError(Exception):
    def __init__(self, message: str, source: str | None = None):
        super().__init__(message)
        self.source = source


def _dump(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=True)


def _poly_text(coeffs: Sequence[int], var: str = "y") -> str:
    terms = []
    for power, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if power == 0 else (var if power == 1 else f"{var}^{power}")
        if mono and abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    head_sign, head = terms[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def cmd_coeffs(args: argparse.Namespace) -> tuple[dict, str]:
    table = coefficient_table(GENERA[args.genus], args.k)
    lines = [f"genus {table['genus']}, k = {table['k']}"]
    lines += [f"  {tuple(row['partition'])}: {row['value']}" for row in table["coefficients"]]
    return table, "\n".join(lines)


def cmd_localize(args: argparse.Namespace) -> tuple[dict, str]:
    try:
        model = load_model(args.model)
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON: {exc.msg}", f"{args.model}:{exc.lineno}:{exc.colno}")
    except ModelError as exc:
        raise CliError(str(exc), args.model)
    try:
        value = integrate(model, class_from_spec(model, args.cls))
    except (DegreeMismatch, ModelError, ValueError) as exc:
        raise CliError(str(exc), f"{args.model} (class {args.cls})")
    payload: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "model": str(args.model),
        "class": args.cls,
        "value": format_rational(value),
        "signature": signature_of(model),
        "residues": residue_consistency(model).to_dict(),
    }
    if model.mode == UNITARY:
        payload["chi_y"] = list(chi_y(model))
    return payload, payload["value"]


def cmd_feasible(args: argparse.Namespace) -> tuple[dict, str]:
    if args.max_dim < 4:
        raise CliError("--max-dim must be at least 4")
    payload: dict[str, Any] = {"schema": SCHEMA_VERSION, "class": args.cls, "max_dim": args.max_dim}
    if args.cls == "oriented":
        payload["admissible"] = admissible_oriented_dims(args.max_dim)
        payload["verdicts"] = [oriented_filter(d).to_dict() for d in range(4, args.max_dim + 1, 4)]
    elif args.cls == "spin":
        verdicts = [spin_filter(d) for d in range(1, args.max_dim + 1)]
        payload["admissible"] = [v.dim for v in verdicts if v.admissible]
        payload["verdicts"] = [v.to_dict() for v in verdicts if v.dim % 4 == 0]
    else:
        rows = unitary_dimension_report(max(1, args.max_dim // 8))
        rows = [row for row in rows if row["dim"] <= args.max_dim]
        open_8k = {row["dim"] for row in rows if row["status"] == ADMISSIBLE}
        payload["admissible"] = [
            d for d in admissible_oriented_dims(args.max_dim) if d % 8 == 4 or d in open_8k
        ]
        payload["rows"] = rows
    text = f"{args.cls} admissible dimensions <= {args.max_dim}: " + ", ".join(
        map(str, payload["admissible"])
    )
    return payload, text


def cmd_solve_dim8(args: argparse.Namespace) -> tuple[dict, str]:
    solutions = dim8_unitary_solve()
    payload = {
        "schema": SCHEMA_VERSION,
        "solutions": [
            {"sign": s.sign, "c4": s.c4, "c22": s.c22, "todd": s.todd} for s in solutions
        ],
    }
    lines = ["sign  c4  c22  todd"] + [
        f"{s.sign:>4}  {s.c4:>2}  {s.c22:>3}  {s.todd:>4}" for s in solutions
    ]
    return payload, "\n".join(lines)


def cmd_parity_search(args: argparse.Namespace) -> tuple[dict, str]:
    found = kosniowski_parity_search(args.chi_neg1, args.chi_1)
    payload = {
        "schema": SCHEMA_VERSION,
        "chi_neg1": args.chi_neg1,
        "chi_1": args.chi_1,
        "searched": (2 * (4 + 1)) ** 3,
        "assignments": [a.to_dict() for a in found],
    }
    if not found:
        return payload, "no consistent assignment"
    lines = [f"d={a.d} eps={a.eps}  chi_y = {_poly_text(a.polynomial(4))}" for a in found]
    return payload, "\n".join(lines)


def cmd_verify(args: argparse.Namespace) -> tuple[dict, str]:
    if args.max_dim < 16:
        raise CliError("--max-dim must be at least 16")
    report = verify_theorem(args.max_dim)
    lines = [
        f"oriented: {report['oriented']['admissible']}",
        f"spin:     {report['spin']['admissible']}",
        f"unitary:  {report['unitary']['admissible']}",
    ]
    lines += [f"{name}: {'ok' if ok else 'FAILED'}" for name, ok in report["checks"].items()]
    return report, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--meta", action="store_true", help="include run metadata in JSON output")

    parser = argparse.ArgumentParser(
        prog="threepoint",
        description="Exact genus coefficients, localization and dimension filters "
        "for circle actions with three fixed points.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="multiplicative-sequence coefficient table")
    p.add_argument("--genus", choices=sorted(GENERA), required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("localize", parents=[common], help="integrate a class over a fixed-point model")
    p.add_argument("--model", required=True)
    p.add_argument("--class", dest="cls", required=True, help="t^k, euler, or p<parts> such as p1 or p1,1")
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("feasible", parents=[common], help="admissible dimensions per manifold class")
    p.add_argument("--max-dim", type=int, required=True)
    p.add_argument("--class", dest="cls", choices=["oriented", "spin", "unitary"], default="oriented")
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("solve-dim8", parents=[common], help="dimension-8 unitary Chern-number solutions")
    p.set_defaults(func=cmd_solve_dim8)

    p = sub.add_parser("parity-search", parents=[common], help="exhaustive chi_y parity search")
    p.add_argument("--chi-neg1", type=int, required=True)
    p.add_argument("--chi-1", type=int, required=True)
    p.set_defaults(func=cmd_parity_search)

    p = sub.add_parser("verify", parents=[common], help="check all three dimension statements")
    p.add_argument("--max-dim", type=int, required=True)
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.command == "coeffs" and args.k < 1:
        print(_dump({"error": "ValueError", "message": "--k must be positive"}), file=stderr)
        return 1
    try:
        payload, text = args.func(args)
    except CliError as exc:
        err = {"error": "CliError", "message": str(exc)}
        if exc.source:
            err["source"] = exc.source
        print(_dump(err), file=stderr)
        return 1
    except (FlavorMismatch, DegreeMismatch, ModelError, OSError, ValueError) as exc:
        print(_dump({"error": type(exc).__name__, "message": str(exc)}), file=stderr)
        return 1
    if args.json:
        if args.meta:
            payload = dict(payload)
            payload["meta"] = {
                "version": __version__,
                "python": platform.python_version(),
                "argv": list(argv) if argv is not None else sys.argv[1:],
                "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            }
        print(_dump(payload), file=stdout)
    else:
        print(text, file=stdout)
    return 0


def main() -> None:
    sys.exit(run())

"""hamfactor command line.

Exit codes: 0 success, 2 unreadable JSON, 3 invalid spec, 4 usage,
5 a verification transcript failed.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import report as rp
from .classifier import classify, conserved_report
from .dsolver import DFamily, compare_with_oracle, solve_family
from .exact import RatMatrix, format_rational, parse_rational, substitute
from .flow import FlowConfig, demo_flow
from .integrability import (IntegrityError, build_integrable, commutant, compare_commutant,
                            verify_system)
from .jordan import JordanSpec, SpecError, pushforward_D, realize, spec_from_json, spec_to_json

EXIT_OK, EXIT_PARSE, EXIT_SPEC, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(EXIT_USAGE, f"{self.prog}: {message}")


def max_dim() -> int:
    raw = os.environ.get("HAMFACTOR_MAX_DIM", "64")
    try:
        return int(raw)
    except ValueError:
        raise CliError(EXIT_USAGE, f"HAMFACTOR_MAX_DIM must be an integer, got {raw!r}") from None


def load_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


@dataclass
class Loaded:
    spec: JordanSpec
    b: RatMatrix
    matrix: RatMatrix | None
    conj: Any


def load_spec(path: str) -> Loaded:
    doc = load_json(path)
    try:
        spec, mat, conj = spec_from_json(doc)
    except SpecError as exc:
        raise CliError(EXIT_SPEC, f"{path}: {exc}") from None
    cap = max_dim()
    if spec.m > cap:
        raise CliError(EXIT_SPEC, f"{path}: dimension {spec.m} exceeds HAMFACTOR_MAX_DIM={cap}")
    return Loaded(spec, realize(spec), mat, conj)


# --------------------------------------------------------------------------
# Assignments


def _aliases(name: str) -> set[str]:
    """``g1.d_1_4`` answers to ``d_1_4`` and ``d14``; ambiguous aliases are dropped later."""
    local = name.split(".", 1)[1]
    out = {name, local}
    m = re.fullmatch(r"([a-z]+)_(\d+)_(\d+)", local)
    if m:
        out.add(m.group(1) + m.group(2) + m.group(3))
    return out


def resolve_assignments(items: list[str], family: DFamily) -> dict[str, Fraction]:
    table: dict[str, set[str]] = {}
    for p in family.params:
        for a in _aliases(p):
            table.setdefault(a, set()).add(p)
    out = {p: Fraction(0) for p in family.params}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise CliError(EXIT_USAGE, f"--assign expects name=rational, got {item!r}")
        key = key.strip()
        hits = table.get(key, set())
        if not hits:
            raise CliError(EXIT_USAGE, f"unknown parameter {key!r}; known: {', '.join(family.params) or '(none)'}")
        if len(hits) > 1:
            raise CliError(EXIT_USAGE, f"ambiguous parameter {key!r}: {', '.join(sorted(hits))}")
        try:
            out[hits.pop()] = parse_rational(val)
        except ValueError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
    return out


def _assigned_d(family: DFamily, asg: dict[str, Fraction], m: int) -> RatMatrix:
    return substitute(family.general, asg) if family.params else RatMatrix.zeros(m)


# --------------------------------------------------------------------------
# Fragments


def frag_solve_d(ld: Loaded, oracle: bool) -> dict:
    fam = solve_family(ld.spec)
    body = {"spec": spec_to_json(ld.spec), "family": rp.family_to_json(fam)}
    if ld.conj is not None:
        body["original_frame"] = rp.param_to_json(pushforward_D(fam.general, ld.conj.inverted()))
    if oracle:
        body["oracle"] = rp.comparison_to_json(compare_with_oracle(ld.spec, fam))
    return body


def frag_classify(ld: Loaded, assign: list[str]) -> dict:
    fam = solve_family(ld.spec)
    asg = resolve_assignments(assign, fam)
    d = _assigned_d(fam, asg, ld.spec.m)
    return {"spec": spec_to_json(ld.spec),
            "assignment": {k: format_rational(v) for k, v in asg.items()},
            "d": rp.mat_to_json(d),
            "classification": rp.structure_to_json(classify(ld.b, d)),
            "conserved": rp.conserved_to_json(conserved_report(ld.b, d))}


def frag_commutant(ld: Loaded, oracle: bool) -> dict:
    fam = commutant(ld.spec)
    body = {"spec": spec_to_json(ld.spec), "commutant": rp.family_to_json(fam)}
    if oracle:
        body["commutant_oracle"] = rp.comparison_to_json(compare_commutant(ld.spec, fam))
    return body


def frag_integrable(ld: Loaded, seed: int) -> dict:
    try:
        system = build_integrable(ld.spec, seed=seed)
    except IntegrityError as exc:
        raise CliError(EXIT_INTERNAL, f"transcript failed: {exc}") from None
    return {"spec": spec_to_json(ld.spec), "integrable": rp.system_to_json(system)}


# --------------------------------------------------------------------------
# Commands


def _emit(doc: dict, args) -> None:
    text = rp.render_text(doc) if args.format == "text" else json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve_d(args) -> int:
    _emit(rp.envelope("solve-d", args.seed, frag_solve_d(load_spec(args.spec), args.oracle)), args)
    return EXIT_OK


def cmd_classify(args) -> int:
    body = frag_classify(load_spec(args.spec), args.assign)
    _emit(rp.envelope(args.command, args.seed, body), args)
    return EXIT_OK


def cmd_commutant(args) -> int:
    _emit(rp.envelope("commutant", args.seed, frag_commutant(load_spec(args.spec), args.oracle)), args)
    return EXIT_OK


def cmd_integrable(args) -> int:
    _emit(rp.envelope("integrable", args.seed, frag_integrable(load_spec(args.spec), args.seed)), args)
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = load_json(args.report)
    try:
        rp.check_envelope(doc)
        if not doc.get("integrable"):
            raise rp.ReportError("report has no integrable section")
        system = rp.system_from_json(doc["integrable"])
    except rp.ReportError as exc:
        raise CliError(EXIT_SPEC, f"{args.report}: {exc}") from None
    saved = doc["integrable"].get("transcript") or {}
    seed = saved.get("seed", args.seed)
    transcript = verify_system(system, seed)
    out = rp.envelope("verify", seed, {"transcript": rp.transcript_to_json(transcript)})
    _emit(out, args)
    return EXIT_OK if transcript.passed else EXIT_INTERNAL


def cmd_report(args) -> int:
    doc = load_json(args.spec)
    if isinstance(doc, dict) and doc.get("schema") == rp.SCHEMA:
        # re-render a saved report
        try:
            rp.check_envelope(doc)
        except rp.ReportError as exc:
            raise CliError(EXIT_SPEC, f"{args.spec}: {exc}") from None
        _emit(doc, args)
        return EXIT_OK
    ld = load_spec(args.spec)
    body = frag_solve_d(ld, oracle=True)
    body.update(frag_classify(ld, args.assign))
    body.update(frag_integrable(ld, args.seed))
    _emit(rp.envelope("report", args.seed, body), args)
    return EXIT_OK


def cmd_demo_flow(args) -> int:
    ld = load_spec(args.spec)
    fam = solve_family(ld.spec)
    d = _assigned_d(fam, resolve_assignments(args.assign, fam), ld.spec.m)
    if args.steps < 1 or args.t_max <= 0:
        raise CliError(EXIT_USAGE, "--steps must be >= 1 and --t-max > 0")
    cas = [c.vector for c in conserved_report(ld.b, d).casimirs]
    times, ham, cvals = demo_flow(ld.b, d, cas, FlowConfig(args.t_max, args.steps, args.seed))
    lines = ["# RK4 at double precision; H and the Casimirs are exact invariants, "
             "so any drift is integrator error only",
             ",".join(["t", "H"] + [f"casimir{k + 1}" for k in range(len(cas))])]
    for k in range(times.size):
        row = [times[k], ham[k]] + [c[k] for c in cvals]
        lines.append(",".join(repr(float(x)) for x in row))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hamfactor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, spec_help="Jordan spec JSON file"):
        p.add_argument("spec", help=spec_help)
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        return p

    p = common(sub.add_parser("solve-d", help="symmetric D with DB skew"))
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_solve_d)
    for name in ("classify", "casimirs"):
        p = common(sub.add_parser(name, help="structure, Casimirs and isotropic fields of one D"))
        p.add_argument("--assign", action="append", default=[], metavar="NAME=RATIONAL")
        p.set_defaults(func=cmd_classify)
    p = common(sub.add_parser("commutant", help="all matrices commuting with B"))
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_commutant)
    p = common(sub.add_parser("integrable", help="verified Hamiltonian integrable system"))
    p.set_defaults(func=cmd_integrable)
    p = common(sub.add_parser("verify", help="re-run the transcript of a saved report"), "saved report JSON")
    p.set_defaults(func=cmd_verify)
    p = common(sub.add_parser("report", help="full report, or re-render a saved one"),
               "spec or saved report JSON")
    p.add_argument("--assign", action="append", default=[], metavar="NAME=RATIONAL")
    p.set_defaults(func=cmd_report)
    p = common(sub.add_parser("demo-flow", help="RK4 trajectory with H and Casimirs as CSV"))
    p.add_argument("--assign", action="append", default=[], metavar="NAME=RATIONAL")
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=1000)
    p.set_defaults(func=cmd_demo_flow)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify":
            args.report = args.spec
        return args.func(args)
    except CliError as exc:
        print(f"hamfactor: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

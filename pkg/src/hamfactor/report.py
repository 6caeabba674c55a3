"""JSON encoding of pipeline results and a plain-text rendering of the same document.

Rationals are always strings. The text renderer reads the JSON document, so
both output formats carry identical numbers.
"""

from __future__ import annotations

from typing import Any

from .classifier import ConservedReport, StructureClass, Verdict
from .dsolver import DFamily, OracleComparison
from .exact import LinForm, ParamMatrix, RatMatrix, format_rational, parse_rational
from .integrability import (Check, CommutantFamily, IntegrableSystem, LinearIntegral, Transcript)

SCHEMA = "hamfactor.report"
REPORT_VERSION = 1


class ReportError(ValueError):
    """A saved report does not follow the schema."""


def mat_to_json(m: RatMatrix | None):
    if m is None:
        return None
    return [[format_rational(x) for x in row] for row in m.tolist()]


def mat_from_json(rows) -> RatMatrix:
    try:
        return RatMatrix.from_rows([[parse_rational(x) for x in r] for r in rows])
    except (TypeError, ValueError) as exc:
        raise ReportError(f"bad matrix: {exc}") from None


def form_to_json(f: LinForm) -> dict:
    return {"constant": format_rational(f.constant),
            "terms": {k: format_rational(v) for k, v in sorted(f.terms.items())}}


def form_from_json(d: dict) -> LinForm:
    return LinForm(parse_rational(d["constant"]),
                   {k: parse_rational(v) for k, v in d["terms"].items()})


def param_to_json(p: ParamMatrix) -> dict:
    return {"rows": p.rows, "cols": p.cols, "params": list(p.params),
            "entries": [[form_to_json(p[i, j]) for j in range(p.cols)] for i in range(p.rows)]}


def param_from_json(d: dict) -> ParamMatrix:
    ent = [form_from_json(e) for row in d["entries"] for e in row]
    return ParamMatrix(d["rows"], d["cols"], ent, d["params"])


def family_to_json(fam: DFamily | CommutantFamily) -> dict:
    return {"dim": fam.dim, "general": param_to_json(fam.general),
            "basis": [{"param": n, "matrix": mat_to_json(m)} for n, m in fam.basis]}


def comparison_to_json(c: OracleComparison) -> dict:
    return {"closed_dim": c.closed_dim, "oracle_dim": c.oracle_dim,
            "closed_in_oracle": c.closed_in_oracle, "oracle_in_closed": c.oracle_in_closed,
            "agree": c.agree}


def structure_to_json(sc: StructureClass) -> dict:
    kind = None
    if sc.structure_matrix is not None:
        kind = "pi" if sc.verdict == Verdict.POISSON else "omega"
    return {"verdict": sc.verdict.value, "null_pairing": sc.null_pairing,
            "structure_kind": kind, "structure_matrix": mat_to_json(sc.structure_matrix),
            "kernel_witness": mat_to_json(sc.kernel_witness)}


def conserved_to_json(cr: ConservedReport) -> dict:
    return {"convention": cr.convention, "hamiltonian": mat_to_json(cr.hamiltonian),
            "casimirs": [{"vector": mat_to_json(c.vector), "witness": mat_to_json(c.witness)}
                         for c in cr.casimirs],
            "isotropic_fields": [{"field": mat_to_json(f.field), "xi": mat_to_json(f.xi)}
                                 for f in cr.isotropic_fields]}


def transcript_to_json(t: Transcript) -> dict:
    return {"seed": t.seed, "passed": t.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in t.checks]}


def system_to_json(s: IntegrableSystem) -> dict:
    labels = list(s.integral_labels)
    nq = len(s.quadratic_integrals)
    return {
        "p": s.p, "q": s.q, "m": s.m,
        "verdict": s.structure.verdict.value if s.structure else None,
        "b": mat_to_json(s.b), "d0": mat_to_json(s.d0),
        "fields": [{"label": lab, "matrix": mat_to_json(c), "hamiltonian": mat_to_json(h),
                    "witness": mat_to_json(z)}
                   for lab, c, h, z in zip(s.field_labels, s.vector_fields, s.hamiltonians,
                                           s.witnesses)],
        "quadratic_integrals": [{"label": labels[k], "matrix": mat_to_json(m)}
                                for k, m in enumerate(s.quadratic_integrals)],
        "linear_integrals": [{"label": li.label, "covector": mat_to_json(li.covector),
                              "witness": mat_to_json(li.witness)} for li in s.linear_integrals],
        "transcript": transcript_to_json(s.transcript) if s.transcript else None,
    }


def system_from_json(d: dict) -> IntegrableSystem:
    try:
        fields = d["fields"]
        quad = d["quadratic_integrals"]
        lin = d["linear_integrals"]
        return IntegrableSystem(
            b=mat_from_json(d["b"]), d0=mat_from_json(d["d0"]),
            vector_fields=tuple(mat_from_json(f["matrix"]) for f in fields),
            hamiltonians=tuple(mat_from_json(f["hamiltonian"]) for f in fields),
            witnesses=tuple(mat_from_json(f["witness"]) for f in fields),
            quadratic_integrals=tuple(mat_from_json(x["matrix"]) for x in quad),
            linear_integrals=tuple(LinearIntegral(mat_from_json(x["covector"]),
                                                  mat_from_json(x["witness"]), x["label"])
                                   for x in lin),
            field_labels=tuple(f["label"] for f in fields),
            integral_labels=tuple(x["label"] for x in quad) + tuple(x["label"] for x in lin),
        )
    except (KeyError, TypeError) as exc:
        raise ReportError(f"integrable section malformed: {exc}") from None


def transcript_from_json(d: dict) -> Transcript:
    return Transcript(tuple(Check(c["name"], c["passed"], c["detail"]) for c in d["checks"]),
                      d["seed"])


def envelope(command: str, seed: int, body: dict[str, Any]) -> dict:
    return {"schema": SCHEMA, "schema_version": REPORT_VERSION, "command": command,
            "seed": seed, **body}


def check_envelope(doc: Any) -> dict:
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise ReportError("not a hamfactor report")
    if doc.get("schema_version") != REPORT_VERSION:
        raise ReportError(f"unsupported report version {doc.get('schema_version')!r}")
    return doc


# --------------------------------------------------------------------------
# Text


def _fmt_rows(rows, indent="    ") -> list[str]:
    if not rows:
        return [indent + "[]"]
    width = max(len(x) for r in rows for x in r)
    return [indent + "[ " + "  ".join(x.rjust(width) for x in r) + " ]" for r in rows]


def _fmt_vec(rows) -> str:
    return "(" + ", ".join(r[0] for r in rows) + ")"


def _fmt_form(d: dict) -> str:
    parts = []
    if d["constant"] != "0" or not d["terms"]:
        parts.append(d["constant"])
    for k, v in d["terms"].items():
        if v == "1":
            parts.append(k)
        elif v == "-1":
            parts.append("-" + k)
        else:
            parts.append(f"{v}*{k}")
    return " + ".join(parts).replace("+ -", "- ")


def render_text(doc: dict) -> str:
    out = [f"hamfactor {doc['command']} (report v{doc['schema_version']}, seed {doc['seed']})"]
    if "spec" in doc:
        out.append("spec:")
        for b in doc["spec"]["blocks"]:
            out.append("  " + ", ".join(f"{k}={v}" for k, v in b.items()))
    if "family" in doc:
        fam = doc["family"]
        g = fam["general"]
        out.append(f"D family: dim {fam['dim']}, params {', '.join(g['params']) or '(none)'}")
        rows = [[_fmt_form(e) for e in r] for r in g["entries"]]
        out += _fmt_rows(rows)
    if "original_frame" in doc:
        g = doc["original_frame"]
        out.append("D family in the input frame:")
        out += _fmt_rows([[_fmt_form(e) for e in r] for r in g["entries"]])
    for key, title in (("oracle", "oracle"), ("commutant_oracle", "commutant oracle")):
        if key in doc:
            c = doc[key]
            out.append(f"{title}: closed dim {c['closed_dim']}, oracle dim {c['oracle_dim']}, "
                       f"{'agree' if c['agree'] else 'DISAGREE'}")
    if "commutant" in doc:
        fam = doc["commutant"]
        out.append(f"commutant: dim {fam['dim']}")
        out += _fmt_rows([[_fmt_form(e) for e in r] for r in fam["general"]["entries"]])
    if "assignment" in doc:
        asg = doc["assignment"]
        out.append("assignment: " + (", ".join(f"{k}={v}" for k, v in asg.items() if v != "0")
                                     or "all zero"))
    if "classification" in doc:
        c = doc["classification"]
        out.append(f"verdict: {c['verdict']}" + ("  (DB = 0)" if c["null_pairing"] else ""))
        if c["structure_matrix"] is not None:
            out.append(f"  {c['structure_kind']}#:")
            out += _fmt_rows(c["structure_matrix"])
        if c["kernel_witness"] is not None:
            out.append(f"  common kernel vector: {_fmt_vec(c['kernel_witness'])}")
    if "conserved" in doc:
        cr = doc["conserved"]
        out.append(f"hamiltonian S, {cr['convention']}:")
        out += _fmt_rows(cr["hamiltonian"])
        for k, c in enumerate(cr["casimirs"]):
            out.append(f"  casimir {k + 1}: c = {_fmt_vec(c['vector'])}  eta = {_fmt_vec(c['witness'])}")
        for k, f in enumerate(cr["isotropic_fields"]):
            out.append(f"  isotropic field {k + 1}: X = {_fmt_vec(f['field'])}  xi = {_fmt_vec(f['xi'])}")
    if "integrable" in doc:
        s = doc["integrable"]
        out.append(f"integrable system: p={s['p']} q={s['q']} m={s['m']} verdict {s['verdict']}")
        out.append("  D0:")
        out += _fmt_rows(s["d0"], "    ")
        for k, f in enumerate(s["fields"]):
            out.append(f"  C{k + 1} [{f['label']}]:")
            out += _fmt_rows(f["matrix"], "    ")
            out.append(f"    H{k + 1} = D0 Z{k + 1}:")
            out += _fmt_rows(f["hamiltonian"], "      ")
            out.append(f"    Z{k + 1} (B Z = C):")
            out += _fmt_rows(f["witness"], "      ")
        for k, f in enumerate(s["quadratic_integrals"]):
            out.append(f"  S{k + 1} [{f['label']}]:")
            out += _fmt_rows(f["matrix"], "    ")
        for k, f in enumerate(s["linear_integrals"]):
            out.append(f"  c{k + 1} [{f['label']}]: {_fmt_vec(f['covector'])}  "
                       f"z = {_fmt_vec(f['witness'])}")
        if s.get("transcript"):
            out.append(_render_transcript(s["transcript"]))
    if "transcript" in doc:
        out.append(_render_transcript(doc["transcript"]))
    return "\n".join(out) + "\n"


def _render_transcript(t: dict) -> str:
    lines = [f"transcript (seed {t['seed']}): {'PASS' if t['passed'] else 'FAIL'}"]
    for c in t["checks"]:
        lines.append(f"  {'ok  ' if c['passed'] else 'FAIL'} {c['name']}" + (f": {c['detail']}" if c["detail"] else ""))
    return "\n".join(lines)

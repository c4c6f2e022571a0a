"""JSON and CSV serialisation of analysis results.

Exact rationals become ``"num/den"`` strings (integers ``"3"``), floats stay
JSON numbers written by ``repr`` (shortest round trip).  Nothing
time-dependent is recorded, so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

import jsonschema
import numpy as np

from .checkpoints import CheckpointPolicy, Outcome, Verdict
from .sequence_model import Point

_SCALAR = {"oneOf": [{"type": "number"}, {"type": "string"}]}
_VALUE = {"oneOf": [_SCALAR, {"type": "array", "items": _SCALAR}, {"type": "null"}]}

OPERATIONS = (
    "density", "cesaro", "wp", "stat", "cauchy", "connor", "witness", "stolz",
    "hbound", "wuc", "member", "construct", "weak", "weakstar", "subset", "opnorm",
)

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["operation", "spec", "mode", "p", "policy", "checkpoints", "outcome", "candidate_L", "notes"],
    "properties": {
        "operation": {"enum": list(OPERATIONS)},
        "spec": {"type": "object", "additionalProperties": {"type": ["string", "null"]}},
        "mode": {"enum": ["exact", "float"]},
        "p": {"type": ["string", "null"]},
        "policy": {
            "type": "object",
            "required": ["n0", "growth", "count", "abs_tol", "decay_ratio", "div_threshold", "band", "zero_floor"],
        },
        "checkpoints": {
            "type": "array",
            "items": {"type": "array", "prefixItems": [{"type": "integer"}, _VALUE], "minItems": 2, "maxItems": 2},
        },
        "outcome": {"enum": [o.value for o in Outcome] + [None]},
        "limit": _VALUE,
        "candidate_L": _VALUE,
        "certificate": {"enum": ["truncation", "witness", "none"]},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}


def scalar(v):
    """JSON form of one number."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    return v


def point(p):
    """Scalars for d = 1, lists otherwise; None passes through."""
    if p is None:
        return None
    if isinstance(p, Point):
        return scalar(p.coords[0]) if p.dim == 1 else [scalar(c) for c in p.coords]
    return scalar(p)


def jsonable(obj):
    """Recursively convert points, fractions and tuples for ``json.dumps``.

    Bare integers are structural (indices, counts) and stay JSON integers;
    numeric values that may be exact go through :func:`point` first.
    """
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, Point):
        return point(obj)
    if isinstance(obj, Verdict):
        return verdict_fields(obj)
    if isinstance(obj, Outcome):
        return obj.value
    if obj is None or isinstance(obj, str):
        return obj
    return scalar(obj)


def verdict_fields(v: Verdict) -> dict:
    return {
        "outcome": v.outcome.value,
        "limit": point(v.limit),
        "certificate": v.certificate,
        "checkpoints": [[int(n), point(x)] for n, x in v.evidence],
        "notes": list(v.notes),
    }


def make_report(operation: str, spec: dict, mode: str, policy: CheckpointPolicy, p=None,
                verdict: Verdict | None = None, checkpoints=None, candidate=None, notes=(), **extra) -> dict:
    """Assemble the common report skeleton; ``extra`` keys follow in order."""
    report = {
        "operation": operation,
        "spec": {k: str(v) for k, v in spec.items() if v is not None},
        "mode": mode,
        "p": None if p is None else str(Fraction(p)),
        "policy": jsonable(policy.to_dict()),
        "checkpoints": [],
        "outcome": None,
        "candidate_L": point(candidate),
        "notes": list(notes),
    }
    if verdict is not None:
        fields = verdict_fields(verdict)
        report["outcome"] = fields["outcome"]
        report["limit"] = fields["limit"]
        report["certificate"] = fields["certificate"]
        report["checkpoints"] = fields["checkpoints"]
        report["notes"] = fields["notes"] + report["notes"]
        if candidate is None:
            report["candidate_L"] = point(verdict.details.get("candidate_L", verdict.limit))
    if checkpoints is not None:
        report["checkpoints"] = [[int(n), point(x)] for n, x in checkpoints]
    for k, v in extra.items():
        report[k] = jsonable(v)
    return report


def validate(report: dict) -> None:
    jsonschema.validate(report, REPORT_SCHEMA)


def to_json(report: dict) -> str:
    validate(report)
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _csv_cell(v):
    if isinstance(v, list):
        return ";".join(str(c) for c in v)
    if v is None:
        return ""
    return str(v) if not isinstance(v, float) else repr(v)


def _float_cell(v):
    """Decimal value for plotting; exact ratios are converted."""
    if isinstance(v, list):
        return max(abs(_as_float(c)) for c in v)
    return _as_float(v)


def _as_float(v):
    if v is None:
        return float("nan")
    if isinstance(v, str):
        try:
            return float(Fraction(v))
        except ValueError:
            return float(v)
    return float(v)


def to_csv(report: dict) -> str:
    """gnuplot-ready table(s): ``n,value,exact`` rows after ``#`` comment lines.

    With ``set datafile separator ","`` the primary table is index 0; extra
    tables follow as further indices (two blank lines apart).  Vector values
    are plotted by their max-norm.
    """
    validate(report)
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    for key in ("operation", "mode", "p", "outcome", "candidate_L", "certificate"):
        if key in report:
            out.write(f"# {key}: {_csv_cell(report[key])}\n")
    for k, v in report["spec"].items():
        out.write(f"# spec.{k}: {v}\n")
    for note in report["notes"]:
        out.write(f"# note: {note}\n")
    tables = [("checkpoints", report["checkpoints"])] + list(report.get("tables", {}).items())
    for i, (name, rows) in enumerate(tables):
        if i:
            out.write("\n\n")
        out.write(f"# table: {name}\n")
        w.writerow(["n", "value", "exact"])
        for n, v in rows:
            w.writerow([n, repr(_float_cell(v)), _csv_cell(v) if not isinstance(v, float) else ""])
    return out.getvalue()


def render(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError(f"unknown format {fmt!r}")

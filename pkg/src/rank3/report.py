"""Serialisation of rank certificates and Pell records.

JSON keys come out in a fixed order, reals are rounded to 12 significant
digits and integers are written as decimal strings, so emitting, parsing and
re-emitting a certificate gives the same bytes.  CSV rows are flattened from
the same dictionary, which keeps the two formats field-for-field identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Optional

from .families import RankCertificate
from .pell import PellPair, admissible

__all__ = [
    "certificate_to_dict",
    "dumps_json",
    "dumps_jsonl",
    "csv_fields",
    "flatten",
    "dumps_csv",
    "dumps_text",
    "pell_records",
    "render_pell",
]

GRAM_SIZE = 3


def _real(x) -> Optional[float]:
    if x is None:
        return None
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return None
    return float(f"{x:.12g}")


def _int(n) -> str:
    return str(int(n))


def certificate_to_dict(cert: RankCertificate) -> dict[str, Any]:
    flags = cert.instance.hypothesis_flags if cert.instance else None
    torsion = None
    if cert.torsion is not None:
        torsion = {"order": _int(cert.torsion.order), "method": cert.torsion.method}
    gram = None
    if cert.gram is not None:
        gram = {
            "entries": [[_real(v) for v in row] for row in cert.gram.entries],
            "errors": [[_real(v) for v in row] for row in cert.gram.entry_errors],
            "log_base": _real(cert.gram.log_base),
        }
    v = cert.verdict
    return {
        "family": cert.family,
        "a": _int(cert.a),
        "b": _int(cert.b),
        "hypothesis_flags": None
        if flags is None
        else {
            "pell_relation_holds": flags.pell_relation_holds,
            "theorem1_hypotheses": flags.theorem1_hypotheses,
            "a_less_than_b": flags.a_less_than_b,
        },
        "torsion": torsion,
        "gram": gram,
        "verdict": {
            "determinant": _real(v.determinant),
            "margin": _real(v.margin),
            "independent": v.independent,
            "rank_lower_bound": _int(v.rank_lower_bound),
        },
        "params": {
            "tol": _real(cert.options.tol),
            "n_max": _int(cert.options.n_max),
            "primes": [_int(p) for p in cert.primes],
        },
        "runtime_ms": _real(round(cert.runtime_ms, 3)),
        "diagnostic": cert.diagnostic,
    }


def dumps_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def dumps_jsonl(objs: Iterable[dict]) -> str:
    return "".join(json.dumps(o, allow_nan=False) + "\n" for o in objs)


def csv_fields() -> list[str]:
    idx = [f"{i}{j}" for i in range(1, GRAM_SIZE + 1) for j in range(1, GRAM_SIZE + 1)]
    return (
        ["family", "a", "b", "pell_relation_holds", "theorem1_hypotheses", "a_less_than_b",
         "torsion_order", "torsion_method", "log_base"]
        + [f"g{k}" for k in idx]
        + [f"e{k}" for k in idx]
        + ["determinant", "margin", "independent", "rank_lower_bound",
           "tol", "n_max", "primes", "runtime_ms", "diagnostic"]
    )


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def flatten(d: dict) -> dict[str, str]:
    """One CSV row (as strings) from a certificate dictionary."""
    flags = d["hypothesis_flags"] or {}
    torsion = d["torsion"] or {}
    gram = d["gram"]
    row = {
        "family": d["family"],
        "a": d["a"],
        "b": d["b"],
        "pell_relation_holds": flags.get("pell_relation_holds"),
        "theorem1_hypotheses": flags.get("theorem1_hypotheses"),
        "a_less_than_b": flags.get("a_less_than_b"),
        "torsion_order": torsion.get("order"),
        "torsion_method": torsion.get("method"),
        "log_base": gram["log_base"] if gram else None,
    }
    for i in range(GRAM_SIZE):
        for j in range(GRAM_SIZE):
            k = f"{i + 1}{j + 1}"
            row[f"g{k}"] = gram["entries"][i][j] if gram else None
            row[f"e{k}"] = gram["errors"][i][j] if gram else None
    row.update(d["verdict"])
    row["tol"] = d["params"]["tol"]
    row["n_max"] = d["params"]["n_max"]
    row["primes"] = ";".join(d["params"]["primes"])
    row["runtime_ms"] = d["runtime_ms"]
    row["diagnostic"] = d["diagnostic"]
    return {k: _cell(row[k]) for k in csv_fields()}


def dumps_csv(dicts: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=csv_fields(), lineterminator="\n")
    w.writeheader()
    for d in dicts:
        w.writerow(flatten(d))
    return buf.getvalue()


def dumps_text(cert: RankCertificate) -> str:
    d = certificate_to_dict(cert)
    lines = [f"{cert.family} family, a = {d['a']}, b = {d['b']}"]
    if cert.instance is not None:
        lines.append(f"  curve: {cert.instance.curve}")
        lines.append("  points: " + ", ".join(str(P) for P in cert.instance.points))
        f = d["hypothesis_flags"]
        lines.append("  flags: " + ", ".join(f"{k}={_cell(v)}" for k, v in f.items()))
    if d["torsion"] is not None:
        t = d["torsion"]
        label = "trivial" if t["order"] == "1" else f"order {t['order']}"
        lines.append(f"  torsion: {label} ({t['method']})")
    if d["gram"] is not None:
        lines.append(f"  gram (log base {d['gram']['log_base']}):")
        for row, err in zip(d["gram"]["entries"], d["gram"]["errors"]):
            lines.append("    " + "  ".join(f"{v:>14.9f} +- {e:.1e}" for v, e in zip(row, err)))
    v = d["verdict"]
    lines.append(
        f"  determinant {v['determinant']}, margin {v['margin']}, "
        f"independent {_cell(v['independent'])}, rank >= {v['rank_lower_bound']}"
    )
    if d["diagnostic"]:
        lines.append(f"  note: {d['diagnostic']}")
    return "\n".join(lines) + "\n"


def pell_records(pairs: Iterable[PellPair]) -> list[dict]:
    return [
        {"n": _int(p.n), "a": _int(p.a), "b": _int(p.b), "admissible": admissible(p)}
        for p in pairs
    ]


def render_pell(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return dumps_jsonl(records)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["n", "a", "b", "admissible"], lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: _cell(v) for k, v in r.items()})
        return buf.getvalue()
    return "".join(f"{r['n']} {r['a']} {r['b']} {_cell(r['admissible'])}\n" for r in records)

"""Report documents: versioned JSON schemas, canonical serialization and
the plain-text rendering used by the ``report`` subcommand.

Documents are plain dicts with a ``schema`` field.  Serialization is
canonical (sorted keys, fixed indentation, trailing newline), so equal
runs produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Dict, Iterable, List, Sequence

from .errors import SchemaMismatch

SCHEMAS: Dict[str, Sequence[str]] = {
    # schema id -> required fields
    "window/v1": ("n", "rho_x", "vertices", "rel_diameter"),
    "geodesics/v1": ("from", "to", "count", "paths"),
    "components/v1": ("word", "components"),
    "constants/v1": ("xi", "l", "sigma", "rho", "mu", "eps", "omega"),
    "relarea/v1": ("word", "area", "status", "caps"),
    "relarea-linear/v1": ("samples", "max_ratio", "violations", "l_bound"),
    "cover-report/v1": ("metric", "radius", "mesh", "multiplicity", "pass"),
    "covering/v1": ("metric", "scale", "cells", "domain_size"),
    "lemma-report/v1": ("name", "instances", "violations", "vacuous"),
    "sc-check/v1": ("satisfied", "lambda", "max_piece_fraction", "params"),
}


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def validate_report(doc: object) -> str:
    """Schema id of a valid document; SchemaMismatch names the missing or
    offending field."""
    if not isinstance(doc, dict):
        raise SchemaMismatch("document is not an object")
    schema = doc.get("schema")
    if schema is None:
        raise SchemaMismatch("missing field 'schema'")
    if schema not in SCHEMAS:
        raise SchemaMismatch(f"unknown schema {schema!r}")
    for field in SCHEMAS[schema]:
        if field not in doc:
            raise SchemaMismatch(f"{schema}: missing field {field!r}")
    return schema


def _rows_for(doc: dict) -> List[tuple]:
    """(quantity, measured, bound, verdict) rows per document type."""
    schema = doc["schema"]
    rows = []
    if schema == "cover-report/v1":
        rows.append(("mesh", doc["mesh"], doc.get("mesh_bound"),
                     _verdict(doc.get("mesh_ok"))))
        rows.append(("multiplicity", doc["multiplicity"],
                     doc.get("multiplicity_bound"),
                     _verdict(doc.get("multiplicity_ok"))))
        rows.append(("covers domain", doc.get("covers_domain"), None,
                     _verdict(doc.get("covers_domain"))))
        rows.append(("cells", doc["cells"], None, ""))
        rows.append(("radius / metric", f'{doc["radius"]} / {doc["metric"]}', None, ""))
    elif schema == "constants/v1":
        rows.append(("xi (raw -> clamped)", f'{doc.get("xi_raw")} -> {doc["xi"]}', None, ""))
        rows.append(("L (raw -> clamped)", f'{doc.get("l_raw")} -> {doc["l"]}', None, ""))
        for s, e in sorted(doc["eps"].items(), key=lambda kv: int(kv[0])):
            rows.append((f"eps({s})", e, None, ""))
        rows.append(("sigma", doc["sigma"], None, ""))
        rows.append(("rho", doc["rho"], None, ""))
        rows.append(("mu", doc["mu"], None, ""))
        om = doc["omega"]
        rows.append(("L-ratio cycles checked", om["cycles_checked"], None, ""))
        rows.append(("L-ratio verdict", om["verdict"], None,
                     "FLAG" if om["diverges"] else "ok"))
    elif schema == "relarea/v1":
        rows.append(("word", doc["word"], None, ""))
        rows.append(("area", "Unknown" if doc["area"] is None else doc["area"],
                     None, doc["status"]))
    elif schema == "relarea-linear/v1":
        rows.append(("max area ratio", doc["max_ratio"], doc["l_bound"],
                     _verdict(not doc["violations"])))
        rows.append(("samples", len(doc["samples"]), None, ""))
    elif schema == "lemma-report/v1":
        rows.append((doc["name"], f'{doc["instances"]} instances',
                     None, "VACUOUS" if doc["vacuous"]
                     else _verdict(not doc["violations"])))
        if doc["violations"]:
            rows.append(("violations", len(doc["violations"]), None, "FAIL"))
    elif schema == "sc-check/v1":
        rows.append(("max piece fraction", doc["max_piece_fraction"],
                     doc["lambda"], _verdict(doc["satisfied"])))
        for k, v in sorted(doc["params"].items()):
            rows.append((k, v, None, ""))
    elif schema == "window/v1":
        rows.append(("vertices", doc["vertices"], None, ""))
        rows.append(("relative diameter", doc["rel_diameter"], None, ""))
        rows.append(("n / rho_x", f'{doc["n"]} / {doc["rho_x"]}', None, ""))
    elif schema == "geodesics/v1":
        rows.append((f'{doc["from"]} -> {doc["to"]}', f'{doc["count"]} geodesics',
                     None, ""))
    elif schema == "components/v1":
        rows.append(("word", doc["word"], None, ""))
        rows.append(("components", len(doc["components"]), None, ""))
    elif schema == "covering/v1":
        rows.append(("cells", doc["cells"] if isinstance(doc["cells"], int)
                     else len(doc["cells"]), None, ""))
        rows.append(("scale / metric", f'{doc["scale"]} / {doc["metric"]}', None, ""))
        rows.append(("domain", doc["domain_size"], None, ""))
    return rows


def _verdict(flag) -> str:
    if flag is None:
        return ""
    return "ok" if flag else "FAIL"


def render_report(docs: Iterable[dict]) -> str:
    """Deterministic fixed-width table over validated documents."""
    table: List[tuple] = []
    for doc in docs:
        schema = validate_report(doc)
        table.append((schema.upper(), "", "", ""))
        for quantity, measured, bound, verdict in _rows_for(doc):
            table.append(("  " + str(quantity), str(measured),
                          "" if bound is None else str(bound), str(verdict)))
    if not table:
        return ""
    widths = [max(len(row[i]) for row in table) for i in range(4)]
    header = ("quantity".ljust(widths[0]), "measured".ljust(widths[1]),
              "bound".ljust(widths[2]), "verdict".ljust(widths[3]))
    widths = [max(w, len(h.strip())) for w, h in zip(widths, header)]
    lines = ["  ".join(("quantity".ljust(widths[0]), "measured".ljust(widths[1]),
                        "bound".ljust(widths[2]), "verdict".ljust(widths[3]))).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in table:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"

"""Machine-readable output: decimal rendering, CSV rows and JSON documents.

Every JSON document carries ``schema_version`` and ``kind``.  Numbers that
may exceed a double are written as decimal strings.  ``emit`` is canonical
(sorted keys, fixed indent) so emit -> parse -> emit is byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

import gmpy2
import jsonschema
from gmpy2 import mpfr

SCHEMA_VERSION = 1

PARTITION_COLUMNS = [
    "N", "s", "k", "value", "log_value", "normalized", "min_denom", "pole", "precision_bits", "pole_words",
]


def decimal_digits(bits: int) -> int:
    return max(1, math.floor(bits * math.log10(2)))


def decimal_str(x, bits: int = 256) -> str:
    """Render an int exactly, and anything else to ``bits`` worth of digits."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        v = mpfr(x)
    if gmpy2.is_zero(v):
        return "0"
    if gmpy2.is_infinite(v):
        return "inf" if v > 0 else "-inf"
    if gmpy2.is_nan(v):
        return "nan"
    n = decimal_digits(bits)
    mant, exp, _ = v.digits(10, n)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+d}"


def rational_str(x: Fraction) -> str:
    return str(Fraction(x))


def word_str(word) -> str:
    return "".join(str(b) for b in word)


def partition_row(result, k, normalized, normalization: str = "sk") -> dict:
    bits = result.precision_bits
    return {
        "N": result.N,
        "s": rational_str(result.s),
        "k": rational_str(Fraction(k)),
        "value": decimal_str(result.value, bits) if not result.pole else "inf",
        "log_value": decimal_str(result.log_value(), bits) if not result.pole else "inf",
        "normalized": decimal_str(normalized, bits) if normalized is not None else "",
        "min_denom": decimal_str(result.min_denom, bits),
        "pole": bool(result.pole),
        "precision_bits": bits,
        "pole_words": ";".join(word_str(w) for w in result.pole_words),
    }


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=PARTITION_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (decimal_str(v) if isinstance(v, bool) else v) for k, v in row.items()})
    return buf.getvalue()


def csv_to_rows(text: str) -> list[dict]:
    rows = []
    for raw in csv.DictReader(io.StringIO(text)):
        row = dict(raw)
        row["N"] = int(row["N"])
        row["precision_bits"] = int(row["precision_bits"])
        row["pole"] = row["pole"] == "true"
        rows.append(row)
    return rows


_STR = {"type": "string"}
_INT = {"type": "integer"}
_BOOL = {"type": "boolean"}
_POINT = {"type": "array", "minItems": 2, "maxItems": 2, "items": _STR}
_BASE = {
    "type": "object",
    "required": ["schema_version", "kind"],
    "properties": {"schema_version": {"const": SCHEMA_VERSION}, "kind": _STR},
}

SCHEMAS = {
    "tri-seq": {
        "required": ["pair", "digits", "terminated", "certified"],
        "properties": {
            "digits": {"type": "array", "items": _STR},
            "terminated": {"type": "boolean"},
            "certified": {"type": "boolean"},
        },
    },
    "partition": {
        "required": ["pair", "normalization", "rows"],
        "properties": {
            "normalization": {"enum": ["sk", "n"]},
            "rows": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": PARTITION_COLUMNS,
                    "properties": {
                        "N": _INT,
                        "pole": _BOOL,
                        "precision_bits": _INT,
                        **{c: _STR for c in ("s", "k", "value", "log_value", "normalized", "min_denom", "pole_words")},
                    },
                },
            },
        },
    },
    "construct": {
        "required": ["digits", "vertices", "representative", "area"],
        "properties": {
            "digits": {"type": "array", "items": _STR},
            "vertices": {"type": "array", "minItems": 3, "maxItems": 3, "items": _POINT},
            "representative": _POINT,
            "area": _STR,
        },
    },
    "theorem1": {
        "required": ["config", "s", "digits", "levels", "verdict"],
        "properties": {"levels": {"type": "array"}, "verdict": _BOOL},
    },
    "theorem2": {
        "required": ["pair", "s", "k", "regime", "fit", "rows", "tail_decreasing", "passed"],
        "properties": {
            "regime": {"enum": ["theorem", "exploratory"]},
            "rows": {"type": "array"},
            "tail_decreasing": _BOOL,
            "passed": _BOOL,
        },
    },
    "diophantine": {
        "required": ["pair", "C", "d", "B_max", "witness"],
        "properties": {"B_max": _INT, "witness": {"type": "array", "minItems": 3, "maxItems": 3, "items": _STR}},
    },
    "verify": {
        "required": ["checks", "passed", "message"],
        "properties": {"checks": {"type": "array"}, "passed": _BOOL, "message": _STR},
    },
    "error": {"required": ["error", "message"], "properties": {"error": _STR, "message": _STR}},
}


def schema_for(kind: str) -> dict:
    extra = SCHEMAS[kind]
    return {
        "type": "object",
        "required": _BASE["required"] + extra.get("required", []),
        "properties": {**_BASE["properties"], **extra.get("properties", {})},
    }


def document(kind: str, **body) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, **body}
    jsonschema.validate(doc, schema_for(kind))
    return doc


def emit(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse(text: str) -> dict:
    doc = json.loads(text)
    if doc.get("kind") not in SCHEMAS:
        raise ValueError(f"unknown document kind {doc.get('kind')!r}")
    jsonschema.validate(doc, schema_for(doc["kind"]))
    return doc

"""Delimited and JSON output with embedded configuration and provenance.

CSV: UTF-8, one header row, '.' decimal separator, floats written with 17
significant digits so that values round-trip exactly. Columns are ordered
configuration first, then results, then error metadata.

JSON: one object ``{config, results, provenance}`` validated against
:data:`JSON_SCHEMA` before it is written.
"""

import csv
import datetime as _dt
import io
import json
import math
import os

import jsonschema

from . import __version__

__all__ = [
    "SCHEMA_VERSION",
    "JSON_SCHEMA",
    "Table",
    "format_value",
    "provenance",
    "render_csv",
    "render_json",
    "write_output",
    "read_output",
]

SCHEMA_VERSION = 1

JSON_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["config", "results", "provenance"],
    "additionalProperties": False,
    "properties": {
        "config": {
            "type": "object",
            "required": ["command"],
            "properties": {"command": {"type": "string"}},
        },
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": {"type": ["number", "integer", "string", "boolean", "null"]},
            },
        },
        "provenance": {
            "type": "object",
            "required": ["version", "timestamp", "schema_version"],
            "properties": {
                "version": {"type": "string"},
                "timestamp": {"type": "string"},
                "schema_version": {"type": "integer"},
            },
        },
    },
}


class Table:
    """Rows sharing a fixed column layout: config, result and error-metadata groups."""

    def __init__(self, config_cols, result_cols, meta_cols):
        self.config_cols = list(config_cols)
        self.result_cols = list(result_cols)
        self.meta_cols = list(meta_cols)
        self.rows = []

    @property
    def columns(self):
        return self.config_cols + self.result_cols + self.meta_cols

    def add(self, **values):
        unknown = set(values) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns {sorted(unknown)}")
        self.rows.append({c: values.get(c) for c in self.columns})

    def column(self, name):
        return [row[name] for row in self.rows]


def format_value(v):
    """Text form of a cell: floats with 17 significant digits, None as empty."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def provenance():
    """Library version, timestamp and schema version.

    The timestamp honours SOURCE_DATE_EPOCH so that reruns can be made
    byte-identical.
    """
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        ts = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        ts = _dt.datetime.now(tz=_dt.timezone.utc).replace(microsecond=0)
    return {"version": __version__, "timestamp": ts.isoformat(), "schema_version": SCHEMA_VERSION}


def render_csv(table, config):
    """CSV text: a ``command`` and ``version`` column, then the table columns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["command", "version"] + table.columns)
    for row in table.rows:
        w.writerow([config["command"], __version__] + [format_value(row[c]) for c in table.columns])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return format_value(v)
    return v


def render_json(table, config):
    """JSON text of ``{config, results, provenance}``, validated against the schema."""
    doc = {
        "config": {k: _json_safe(v) for k, v in config.items()},
        "results": [{k: _json_safe(v) for k, v in row.items()} for row in table.rows],
        "provenance": provenance(),
    }
    jsonschema.validate(doc, JSON_SCHEMA)
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_output(table, config, fmt="csv", out="-", stream=None):
    """Render ``table`` and write it to ``out`` ("-" for standard output)."""
    text = render_csv(table, config) if fmt == "csv" else render_json(table, config)
    if out in (None, "-"):
        (stream or _stdout()).write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def _stdout():
    import sys

    return sys.stdout


def read_output(path_or_text, fmt=None):
    """Parse a file (or text) written by :func:`write_output`.

    Returns ``(config, rows)``. For CSV the config only contains the command
    name; per-row configuration is in the rows.
    """
    text = path_or_text
    if os.path.exists(str(path_or_text)):
        with open(path_or_text, encoding="utf-8") as fh:
            text = fh.read()
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "csv"
    if fmt == "json":
        doc = json.loads(text)
        jsonschema.validate(doc, JSON_SCHEMA)
        return doc["config"], doc["results"]
    rows = list(csv.DictReader(io.StringIO(text)))
    config = {"command": rows[0]["command"]} if rows else {}
    return config, rows

"""Deterministic CSV/JSON writers for band tables and reports."""
from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources
from pathlib import Path

from qpbands import __version__
from qpbands.errors import DomainError

CSV_SCHEMA_VERSION = 1
SCAN_COLUMNS = ("K", "band1", "band2", "continuum_lo", "continuum_hi", "photon_line",
                "residual1", "residual2", "a_prime1", "a_prime2")
FIGURE_COLUMNS = SCAN_COLUMNS + ("pure_attractive",)
ATLAS_COLUMNS = ("beta", "gamma", "band1_bandwidth", "band1_relative_flatness",
                 "band2_max_photon_offset", "gap_band1_to_continuum", "repulsive_exists")


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"refusing to serialize non-finite value {v!r}")
    return repr(v)


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        raise DomainError(f"refusing to serialize non-finite value {v!r}")
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_value(row[c]) for c in columns])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def load_schema(name: str) -> dict:
    text = resources.files("qpbands").joinpath("schema", name).read_text(encoding="utf-8")
    return json.loads(text)


def columns_to_rows(columns, table: dict) -> list:
    n = len(table[columns[0]])
    return [{c: table[c][i] for c in columns} for i in range(n)]


def version_block() -> dict:
    return {"tool": "qpbands", "version": __version__, "csv_schema": CSV_SCHEMA_VERSION}

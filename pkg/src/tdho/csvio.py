"""Comma-separated output with ``#`` metadata lines.

Floats are written with ``repr`` (shortest round-tripping form) so that
identical inputs give byte-identical files.
"""

from __future__ import annotations

import io
import json
import math
from pathlib import Path

import numpy as np

from . import __version__

__all__ = ["format_value", "dumps_csv", "write_csv", "read_csv"]


def format_value(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v) + 0.0  # folds -0.0 into 0.0
    if math.isnan(v):
        return "nan"
    return repr(v)


def dumps_csv(columns, rows, meta=None) -> str:
    buf = io.StringIO()
    header = {"code_version": f"tdho {__version__}"}
    header.update(meta or {})
    for key, value in header.items():
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(format_value(v) for v in row) + "\n")
    return buf.getvalue()


def write_csv(path, columns, rows, meta=None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_csv(columns, rows, meta), encoding="utf-8")
    return path


def read_csv(path):
    """Return ``(meta, columns, data)`` from a file written by :func:`write_csv`."""
    meta, columns, rows = {}, None, []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = json.loads(value)
        elif columns is None:
            columns = line.split(",")
        elif line:
            rows.append([float(v) for v in line.split(",")])
    return meta, columns, np.array(rows, dtype=float).reshape(-1, len(columns or []))

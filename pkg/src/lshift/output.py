"""Deterministic CSV and JSON writers with full-precision floats.

Every float is printed with 17 significant digits (the shortest count
that round-trips IEEE doubles unconditionally), so identical inputs
produce byte-identical files and downstream tools can reproduce figures
exactly.  Output encoding is UTF-8 with "\\n" newlines.
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "format_float", "write_csv", "write_json", "json_text"]


def format_float(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.17g}"


def _json_value(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end_pad = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return "null"
        return format_float(obj)
    if isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{escaped}"'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}"{key}": {_json_value(val, indent, level + 1)}' for key, val in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{end_pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{_json_value(val, indent, level + 1)}" for val in obj]
        return "[\n" + ",\n".join(items) + f"\n{end_pad}]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_text(payload: dict) -> str:
    """Serialize a payload dict (schema_version injected first) to JSON."""
    body = {"schema_version": SCHEMA_VERSION, **payload}
    return _json_value(body, indent=2, level=0) + "\n"


def _emit(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def write_json(payload: dict, path: str) -> None:
    _emit(json_text(payload), path)


def write_csv(header: list[str], rows: list[list], path: str) -> None:
    """Write rows whose cells are floats, ints, or flag strings."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, float):
                cells.append(format_float(cell))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", path)

"""Deterministic CSV/JSON emission.

Numbers are written with 17 significant digits so every double round-trips.
Metadata goes in ``#`` comment lines at the top of CSV files; nothing
time-dependent is ever written, so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Iterable, Mapping, Sequence

__all__ = ["format_value", "render_csv", "render_json", "write_output"]


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    return str(v)


def render_csv(rows: Iterable[Mapping], columns: Sequence[str], header: Mapping[str, object] | None = None) -> str:
    buf = io.StringIO()
    for key, value in (header or {}).items():
        buf.write(f"# {key}: {format_value(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render_json(rows: Iterable[Mapping], columns: Sequence[str]) -> str:
    data = [{c: _json_safe(row[c]) for c in columns} for row in rows]
    return json.dumps(data, indent=1) + "\n"


def write_output(text: str, path: str | os.PathLike | None) -> None:
    """Write ``text`` to ``path`` atomically (temp file + rename), or stdout when ``path`` is None."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

"""Summary-table files: fixed column order, 17 significant digits, csv or json."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .concentration import COLUMNS, SummaryRow

INT_COLUMNS = {"n", "v_i", "v_j", "N", "seed"}


def _fmt(name: str, v) -> str:
    if name in INT_COLUMNS:
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    return format(v, ".17g")


def format_table(rows: list[SummaryRow], fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([_fmt(c, getattr(r, c)) for c in COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        lines = []
        for r in rows:
            cells = []
            for c in COLUMNS:
                s = _fmt(c, getattr(r, c))
                cells.append(f'"{c}": {"null" if s == "nan" else s}')
            lines.append("  {" + ", ".join(cells) + "}")
        body = ",\n".join(lines)
        return "[\n" + body + "\n]\n" if lines else "[]\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit(rows: list[SummaryRow], path, fmt: str = "csv") -> Path:
    path = Path(path)
    try:
        path.write_text(format_table(rows, fmt))
    except OSError as e:
        raise OSError(f"cannot write table to {path}: {e}") from e
    return path


def _row_from(d: dict) -> SummaryRow:
    vals = {}
    for c in COLUMNS:
        v = d[c]
        if c in INT_COLUMNS:
            vals[c] = int(v)
        else:
            vals[c] = float("nan") if v is None or v == "nan" else float(v)
    return SummaryRow(**vals)


def parse_table(text: str, fmt: str = "csv") -> list[SummaryRow]:
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValueError(f"unexpected columns {reader.fieldnames}")
        return [_row_from(d) for d in reader]
    if fmt == "json":
        return [_row_from(d) for d in json.loads(text)]
    raise ValueError(f"unknown format {fmt!r}")


def parse(path, fmt: str | None = None) -> list[SummaryRow]:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    try:
        text = path.read_text()
    except OSError as e:
        raise OSError(f"cannot read table from {path}: {e}") from e
    return parse_table(text, fmt)

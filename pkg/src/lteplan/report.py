"""Tabular output: aligned text tables and CSV.

CSV numbers use ``repr`` (shortest round-trip form), so every emitted value
parses back to the float used in the computation. Several tables in one CSV
stream are separated by one empty line; each starts with its own header.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"table {self.name}: expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(list(values))


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "value"):  # enums
        return str(v.value)
    return str(v)


def _text_cell(v, precision):
    if isinstance(v, float) and not isinstance(v, bool):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.{precision}f}"
    return _csv_cell(v)


def to_csv(tables: list[Table]) -> str:
    buf = io.StringIO()
    for i, t in enumerate(tables):
        if i:
            buf.write("\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(t.columns)
        for row in t.rows:
            w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def to_text(tables: list[Table], precision: int = 3) -> str:
    out = []
    for t in tables:
        cells = [t.columns] + [[_text_cell(v, precision) for v in row] for row in t.rows]
        widths = [max(len(r[c]) for r in cells) for c in range(len(t.columns))]
        numeric = [all(isinstance(row[c], (int, float)) and not isinstance(row[c], bool)
                       for row in t.rows) and t.rows for c in range(len(t.columns))]
        out.append(f"== {t.name} ==")
        for r in cells:
            parts = [s.rjust(w) if numeric[c] else s.ljust(w) for c, (s, w) in enumerate(zip(r, widths))]
            out.append("  ".join(parts).rstrip())
        out.append("")
    return "\n".join(out)

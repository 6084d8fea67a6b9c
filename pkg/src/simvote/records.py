"""Text formats for fuzzy records and defuzzification output.

Records file: one record per line, an optional "id:" prefix, then
comma-separated labels.  '#' starts a comment line; blank lines are
ignored; a record without an explicit id gets its 1-based line number.

Output CSV: one (record_id, label, weight) row per assigned weight, grouped
by record in input order; a skipped record emits a single SKIPPED row.
"""

from __future__ import annotations

from typing import Sequence

from .defuzz import BatchItem, FuzzyRecord, Skipped, TraceEntry
from .errors import EmptyQuery, MalformedInput
from .matrix import check_label


def parse_records_file(text: str) -> list[FuzzyRecord]:
    records = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        record_id = None
        colon = line.find(":")
        comma = line.find(",")
        if colon >= 0 and (comma < 0 or colon < comma):
            record_id = line[:colon].strip()
            if not record_id:
                raise MalformedInput(f"line {lineno}: empty record id")
            line = line[colon + 1:]
        if record_id is None:
            record_id = str(lineno)
        if not line.strip():
            raise EmptyQuery(f"line {lineno}: record has no values")
        labels = []
        for cell in line.split(","):
            cell = cell.strip()
            if not cell:
                raise MalformedInput(f"line {lineno}: empty label")
            labels.append(check_label(cell, f"line {lineno}"))
        records.append(FuzzyRecord.from_labels(labels, record_id))
    return records


def format_records_file(records: Sequence[FuzzyRecord],
                        order: Sequence[str] | None = None) -> str:
    """Inverse of parse_records_file; labels sorted by `order` (or text)."""
    if order is None:
        sort_key = None
    else:
        pos = {label: i for i, label in enumerate(order)}
        sort_key = pos.__getitem__
    lines = []
    for record in records:
        labels = sorted(record.values, key=sort_key)
        prefix = f"{record.id}: " if record.id is not None else ""
        lines.append(prefix + ", ".join(labels))
    return "\n".join(lines) + "\n"


def format_batch_csv(results: Sequence[BatchItem]) -> str:
    """Render batch output as record_id,label,weight rows."""
    lines = ["record_id,label,weight"]
    for record_id, outcome in results:
        if isinstance(outcome, Skipped):
            lines.append(f"{record_id},SKIPPED,{outcome.unknown_label}")
        else:
            for label, weight in outcome.weights.items():
                lines.append(f"{record_id},{label},{weight!r}")
    return "\n".join(lines) + "\n"


def render_trace_table(trace: Sequence[TraceEntry],
                       order: Sequence[str]) -> str:
    """Two-column view of the extraction events: subset+alpha, provenance."""
    pos = {label: i for i, label in enumerate(order)}
    cells = []
    for entry in trace:
        members = ", ".join(sorted(entry.subset, key=pos.__getitem__))
        cells.append("{" + members + "} " + repr(entry.alpha))
    width = max(len(c) for c in cells + ["OUTPUT"]) + 4
    lines = ["OUTPUT".ljust(width) + "COMMENTS"]
    for cell, entry in zip(cells, trace):
        comment = "STORED, UPDATED" if entry.updated else "STORED"
        lines.append(cell.ljust(width) + comment)
    return "\n".join(lines) + "\n"

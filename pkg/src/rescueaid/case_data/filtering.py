"""Limit, outlier-scrub, and median-fill case tables against a dictionary."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from rescueaid.case_data.dictionary import DataDictionary, parse_number
from rescueaid.case_data.tables import Cell, KEY_COLUMN, Table
from rescueaid.groups import ComplicationGroup

#: Minimum non-null samples in a label group before its median may fill nulls.
MIN_FILL_SAMPLES = 5


@dataclass
class FilterReport:
    """What the filter dropped, nulled, and filled."""

    dropped_columns: list[str] = field(default_factory=list)
    outlier_counts: dict[str, int] = field(default_factory=dict)
    fill_counts: dict[str, int] = field(default_factory=dict)

    @property
    def total_outliers(self) -> int:
        return sum(self.outlier_counts.values())

    @property
    def total_fills(self) -> int:
        return sum(self.fill_counts.values())


def _row_group(row: dict[str, Cell]) -> ComplicationGroup:
    raw = row.get("labels")
    if not raw:
        return ComplicationGroup.OTHER_SPECIAL
    groups = []
    for token in str(raw).split(";"):
        token = token.strip()
        if token:
            try:
                groups.append(ComplicationGroup.from_id(token))
            except ValueError:
                continue
    if not groups:
        return ComplicationGroup.OTHER_SPECIAL
    return min(groups, key=lambda g: g.ordinal)


def filter_cases(table: Table, dictionary: DataDictionary) -> tuple[Table, FilterReport]:
    """Apply the three-stage filter: limit columns, null outliers, fill nulls.

    Columns the dictionary does not cover are dropped (the key column is
    always kept). Numeric cells outside the attribute's allowed range, and
    numeric cells that do not parse, are nulled and counted as outliers.
    Remaining null numeric cells are filled with the median of non-null
    values in the same label group when that group has at least
    ``MIN_FILL_SAMPLES`` of them; the even-count median takes the lower
    middle value, so no value is invented. Degenerate input yields an empty
    table plus a report, never an error.
    """
    report = FilterReport()
    kept = [c for c in table.columns if c == KEY_COLUMN or dictionary.covers(c)]
    report.dropped_columns = [c for c in table.columns if c not in kept]

    numeric = [c for c in kept if dictionary.covers(c) and dictionary.entries[c].semantic_type == "numeric"]
    out_rows: list[dict[str, Cell]] = []
    for row in table.rows:
        out_rows.append({c: row[c] for c in kept if c in row and row[c] is not None})

    for column in numeric:
        descriptor = dictionary.entries[column]
        lo, hi = descriptor.allowed_range if descriptor.allowed_range else (float("-inf"), float("inf"))
        outliers = 0
        for row in out_rows:
            if column not in row:
                continue
            number = parse_number(row[column])
            if number is None or not (lo <= number <= hi):
                del row[column]
                outliers += 1
            else:
                row[column] = number
        if outliers:
            report.outlier_counts[column] = outliers

    # Per-group medians, computed after outlier removal.
    for column in numeric:
        by_group: dict[ComplicationGroup, list[float]] = {}
        for row in out_rows:
            if column in row:
                by_group.setdefault(_row_group(row), []).append(float(row[column]))
        fills = 0
        for row in out_rows:
            if column in row:
                continue
            samples = by_group.get(_row_group(row), [])
            if len(samples) >= MIN_FILL_SAMPLES:
                row[column] = statistics.median_low(samples)
                fills += 1
        if fills:
            report.fill_counts[column] = fills

    return Table(columns=kept, rows=out_rows, name=table.name), report

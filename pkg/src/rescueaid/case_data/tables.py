"""Keyed record tables and the case-ID master-key merge.

A :class:`Table` is a thin column-ordered list of rows; cells are strings,
floats, or ``None`` (null). CSV is the interchange format: UTF-8, header row
required, empty string means null.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

logger = logging.getLogger(__name__)

Cell = Union[str, float, None]

KEY_COLUMN = "case_id"


class MissingKeyColumnError(ValueError):
    """A table handed to the merge has no ``case_id`` column."""


@dataclass
class Table:
    """Column-ordered table of case rows. Missing cells are null."""

    columns: list[str]
    rows: list[dict[str, Cell]] = field(default_factory=list)
    name: str = ""

    def __post_init__(self) -> None:
        if len(set(self.columns)) != len(self.columns):
            raise ValueError(f"duplicate column names in table {self.name!r}")

    def get(self, row_index: int, column: str) -> Cell:
        return self.rows[row_index].get(column)

    def column_values(self, column: str) -> list[Cell]:
        return [row.get(column) for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Table):
            return NotImplemented
        return self.columns == other.columns and _normalized(self.rows) == _normalized(other.rows)


def _normalized(rows: list[dict[str, Cell]]) -> list[dict[str, Cell]]:
    return [{k: v for k, v in row.items() if v is not None} for row in rows]


def read_csv(path: Union[str, Path], name: str = "") -> Table:
    """Load a UTF-8 CSV with a header row; empty strings become nulls."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, header row required") from None
        rows: list[dict[str, Cell]] = []
        for raw in reader:
            row: dict[str, Cell] = {}
            for col, value in zip(header, raw):
                if value != "":
                    row[col] = value
            rows.append(row)
    return Table(columns=header, rows=rows, name=name or path.name)


def write_csv(table: Table, path: Union[str, Path]) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow(["" if row.get(c) is None else str(row.get(c)) for c in table.columns])


@dataclass
class MergeReport:
    """Counts from a master-key merge."""

    tables_in: int = 0
    rows_in: int = 0
    rows_out: int = 0
    conflicts: int = 0


def merge_case_tables(tables: Iterable[Table]) -> tuple[Table, MergeReport]:
    """Merge keyed tables into one row per distinct ``case_id``.

    Column set is the union, in first-seen order with ``case_id`` first.
    When the same (case_id, column) carries two different non-null values,
    the later table wins and the conflict is counted; rows inside one table
    are folded with the same rule (later row wins).

    Raises :class:`MissingKeyColumnError` naming any table without the key.
    """
    tables = list(tables)
    for i, table in enumerate(tables):
        if KEY_COLUMN not in table.columns:
            label = table.name or f"table #{i}"
            raise MissingKeyColumnError(f"{label} has no {KEY_COLUMN!r} column")

    columns: list[str] = [KEY_COLUMN]
    merged: dict[str, dict[str, Cell]] = {}
    order: list[str] = []
    report = MergeReport(tables_in=len(tables))

    for table in tables:
        for col in table.columns:
            if col not in columns:
                columns.append(col)
        for row in table.rows:
            key = row.get(KEY_COLUMN)
            if key is None:
                continue  # a keyless row cannot be merged anywhere
            key = str(key)
            report.rows_in += 1
            if key not in merged:
                merged[key] = {KEY_COLUMN: key}
                order.append(key)
            target = merged[key]
            for col, value in row.items():
                if col == KEY_COLUMN or value is None:
                    continue
                previous = target.get(col)
                if previous is not None and previous != value:
                    report.conflicts += 1
                target[col] = value

    report.rows_out = len(order)
    if report.conflicts:
        logger.info("merge resolved %d conflicting cells (last table wins)", report.conflicts)
    out = Table(columns=columns, rows=[merged[k] for k in order], name="merged")
    return out, report

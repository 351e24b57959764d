"""Typed view of one rescue case."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from rescueaid.case_data.dictionary import parse_number
from rescueaid.case_data.tables import Cell
from rescueaid.groups import CANONICAL_UNITS, ComplicationGroup, VitalKind

#: Cell-level separator for multi-valued CSV fields (labels, codes).
LIST_SEPARATOR = ";"


@dataclass(frozen=True)
class VitalReading:
    value: float
    unit: str


@dataclass
class CaseRecord:
    """One rescue case: identifiers, vitals, free text, codes, labels."""

    case_id: str
    recorded_at: str = ""
    mission: Optional[str] = None
    vitals: dict[VitalKind, VitalReading] = field(default_factory=dict)
    history_text: str = ""
    diagnosis_text: str = ""
    diagnosis_codes: list[str] = field(default_factory=list)
    labels: set[ComplicationGroup] = field(default_factory=set)

    def __post_init__(self) -> None:
        if not self.case_id:
            raise ValueError("case_id must be non-empty")
        for kind, reading in self.vitals.items():
            if not reading.unit:
                raise ValueError(f"{self.case_id}: vital {kind.value} lacks a unit")

    def primary_group(self) -> ComplicationGroup:
        """Lowest-ordinal label; unlabeled records fall to other-special."""
        if not self.labels:
            return ComplicationGroup.OTHER_SPECIAL
        return min(self.labels, key=lambda g: g.ordinal)


def record_from_row(row: dict[str, Cell]) -> CaseRecord:
    """Build a CaseRecord from a merged-table row.

    Vital columns are recognized by their kind names and get canonical
    units; ``labels`` and ``diagnosis_codes`` cells are semicolon-separated.
    """
    vitals: dict[VitalKind, VitalReading] = {}
    for kind in VitalKind:
        number = parse_number(row.get(kind.value))
        if number is not None:
            vitals[kind] = VitalReading(value=number, unit=CANONICAL_UNITS[kind])

    labels: set[ComplicationGroup] = set()
    raw_labels = row.get("labels")
    if raw_labels:
        for token in str(raw_labels).split(LIST_SEPARATOR):
            token = token.strip()
            if token:
                labels.add(ComplicationGroup.from_id(token))

    raw_codes = row.get("diagnosis_codes")
    codes = [c.strip() for c in str(raw_codes).split(LIST_SEPARATOR) if c.strip()] if raw_codes else []

    return CaseRecord(
        case_id=str(row.get("case_id", "")),
        recorded_at=str(row.get("recorded_at", "") or ""),
        mission=str(row["mission"]) if row.get("mission") is not None else None,
        vitals=vitals,
        history_text=str(row.get("history_text", "") or ""),
        diagnosis_text=str(row.get("diagnosis_text", "") or ""),
        diagnosis_codes=codes,
        labels=labels,
    )

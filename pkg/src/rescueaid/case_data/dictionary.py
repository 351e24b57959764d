"""Data dictionary: per-attribute descriptors inferred from a table.

The dictionary is the contract between raw tables and everything downstream:
filtering drops columns it does not cover, and encoding decides per attribute
whether to one-hot, normalize, or TF-IDF based on ``semantic_type``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from rescueaid.case_data.tables import Table
from rescueaid.groups import CANONICAL_UNITS, VitalKind

SEMANTIC_TYPES = ("numeric", "categorical", "text", "code")

#: Columns with at most this many distinct string values are categorical.
CATEGORICAL_MAX_DISTINCT = 20

#: Fraction of the observed span added on each side of a numeric range.
RANGE_WIDENING = 0.10


@dataclass
class AttributeDescriptor:
    """Description of one table column."""

    name: str
    semantic_type: str
    unit: Optional[str] = None
    allowed_range: Optional[tuple[float, float]] = None
    acronym_expansion: Optional[str] = None
    description: str = ""

    def __post_init__(self) -> None:
        if self.semantic_type not in SEMANTIC_TYPES:
            raise ValueError(f"{self.name}: unknown semantic type {self.semantic_type!r}")
        if self.semantic_type == "numeric" and not self.unit:
            raise ValueError(f"{self.name}: numeric attributes must declare a unit")
        if self.allowed_range is not None:
            lo, hi = self.allowed_range
            if lo > hi:
                raise ValueError(f"{self.name}: allowed_range min {lo} > max {hi}")


@dataclass
class DataDictionary:
    """All attribute descriptors for one dataset, plus a version tag."""

    entries: dict[str, AttributeDescriptor] = field(default_factory=dict)
    version: str = "1"

    def covers(self, column: str) -> bool:
        return column in self.entries

    def numeric_columns(self) -> list[str]:
        return [n for n, d in self.entries.items() if d.semantic_type == "numeric"]

    def categorical_columns(self) -> list[str]:
        return [n for n, d in self.entries.items() if d.semantic_type == "categorical"]

    def text_columns(self) -> list[str]:
        return [n for n, d in self.entries.items() if d.semantic_type == "text"]

    def to_json(self) -> str:
        payload = {
            "version": self.version,
            "entries": {
                name: {
                    "name": d.name,
                    "semantic_type": d.semantic_type,
                    "unit": d.unit,
                    "allowed_range": list(d.allowed_range) if d.allowed_range else None,
                    "acronym_expansion": d.acronym_expansion,
                    "description": d.description,
                }
                for name, d in self.entries.items()
            },
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "DataDictionary":
        payload = json.loads(text)
        if "version" not in payload:
            raise ValueError("data dictionary JSON requires a version field")
        entries = {}
        for name, raw in payload.get("entries", {}).items():
            rng = raw.get("allowed_range")
            entries[name] = AttributeDescriptor(
                name=raw.get("name", name),
                semantic_type=raw["semantic_type"],
                unit=raw.get("unit"),
                allowed_range=tuple(rng) if rng else None,
                acronym_expansion=raw.get("acronym_expansion"),
                description=raw.get("description", ""),
            )
        return cls(entries=entries, version=str(payload["version"]))

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "DataDictionary":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def parse_number(value: object) -> Optional[float]:
    """Parse a cell to float, returning None when it is not a number."""
    if value is None:
        return None
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(str(value).strip())
    except ValueError:
        return None


_VITAL_NAMES = {kind.value for kind in VitalKind}


def build_dictionary(table: Table, version: str = "1") -> DataDictionary:
    """Infer a dictionary entry for every column of a table.

    Inference: a column whose non-null values all parse as numbers is
    numeric with an allowed range equal to the observed span widened by 10%
    on each side; otherwise at most 20 distinct values make it categorical,
    and anything wordier becomes text. Descriptions start empty, to be
    completed by hand. Columns named after a vital kind get that kind's
    canonical unit; other numeric columns get the placeholder "unknown".
    """
    if len(table) == 0:
        raise ValueError("cannot profile an empty table")

    entries: dict[str, AttributeDescriptor] = {}
    for column in table.columns:
        values = [v for v in table.column_values(column) if v is not None]
        numbers = [parse_number(v) for v in values]
        if values and all(n is not None for n in numbers):
            lo, hi = min(numbers), max(numbers)
            pad = RANGE_WIDENING * (hi - lo)
            unit = CANONICAL_UNITS[VitalKind(column)] if column in _VITAL_NAMES else "unknown"
            entries[column] = AttributeDescriptor(
                name=column,
                semantic_type="numeric",
                unit=unit,
                allowed_range=(lo - pad, hi + pad),
            )
        else:
            distinct = {str(v) for v in values}
            kind = "categorical" if len(distinct) <= CATEGORICAL_MAX_DISTINCT else "text"
            entries[column] = AttributeDescriptor(name=column, semantic_type=kind)
    return DataDictionary(entries=entries, version=version)

"""Deterministic categorical encodings: value-index maps and one-hot vectors."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from rescueaid.case_data.dictionary import DataDictionary
from rescueaid.case_data.tables import Table


@dataclass
class EncodingScheme:
    """Per-attribute ordered vocabularies and value-to-index maps.

    Vocabularies are sorted distinct values, so the scheme is a pure
    function of the data: same table, same scheme, bit-identical vectors.
    """

    categorical_maps: dict[str, dict[str, int]] = field(default_factory=dict)
    one_hot_vocabs: dict[str, list[str]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for attr, vocab in self.one_hot_vocabs.items():
            if len(set(vocab)) != len(vocab):
                raise ValueError(f"{attr}: one-hot vocabulary has duplicates")
        for attr, mapping in self.categorical_maps.items():
            indices = sorted(mapping.values())
            if indices != list(range(len(indices))):
                raise ValueError(f"{attr}: category indices must be contiguous from 0")

    def to_json(self) -> str:
        return json.dumps(
            {"categorical_maps": self.categorical_maps, "one_hot_vocabs": self.one_hot_vocabs},
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "EncodingScheme":
        payload = json.loads(text)
        return cls(
            categorical_maps=payload.get("categorical_maps", {}),
            one_hot_vocabs=payload.get("one_hot_vocabs", {}),
        )

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "EncodingScheme":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def build_encoding_scheme(table: Table, dictionary: DataDictionary) -> EncodingScheme:
    """Fit vocabularies for every categorical column of the dictionary."""
    maps: dict[str, dict[str, int]] = {}
    vocabs: dict[str, list[str]] = {}
    for column in dictionary.categorical_columns():
        values = sorted({str(v) for v in table.column_values(column) if v is not None})
        vocabs[column] = values
        maps[column] = {v: i for i, v in enumerate(values)}
    return EncodingScheme(categorical_maps=maps, one_hot_vocabs=vocabs)


def one_hot_encode(value: object, vocab: Sequence[str]) -> np.ndarray:
    """One-hot vector over ``vocab``; unknown values encode as all zeros.

    The all-zeros convention keeps live inference total when a device or
    operator produces a value never seen during fitting.
    """
    if len(vocab) == 0:
        raise ValueError("one-hot vocabulary must be non-empty")
    vector = np.zeros(len(vocab), dtype=np.float64)
    if value is not None:
        try:
            vector[list(vocab).index(str(value))] = 1.0
        except ValueError:
            pass
    return vector

"""Feature schemas and live feature assembly.

A schema pins the exact layout of the classifier input: two slots per vital
(normalized value, missing flag), then one one-hot block per categorical
attribute, then the TF-IDF weights of the k rarest vocabulary terms. The
schema is fitted once alongside the encoders and shipped with the model, so
training and live inference can never disagree about offsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from rescueaid.case_data.encoding import EncodingScheme, one_hot_encode
from rescueaid.case_data.dictionary import DataDictionary
from rescueaid.case_data.tfidf import TfIdfModel, transform_tfidf
from rescueaid.groups import VitalKind

#: Value written into a vital slot when no measurement is available.
MISSING_VITAL_FILL = 0.5

#: Default width of the TF-IDF segment.
DEFAULT_TFIDF_TOP_K = 64

#: Columns that never become features: the target, identifiers, timestamps.
EXCLUDED_FEATURE_COLUMNS = frozenset({"labels", "case_id", "recorded_at"})


class SchemaMismatchError(ValueError):
    """Schema disagrees with the encoders it claims to describe."""


@dataclass(frozen=True)
class VitalSlot:
    kind: VitalKind
    norm_min: float
    norm_max: float

    def __post_init__(self) -> None:
        if not self.norm_min < self.norm_max:
            raise ValueError(f"{self.kind.value}: normalization min must be below max")


@dataclass
class FeatureSchema:
    """Ordered input layout: vitals, one-hot blocks, TF-IDF top-k terms."""

    schema_id: str
    vitals: list[VitalSlot] = field(default_factory=list)
    one_hot_attrs: list[str] = field(default_factory=list)
    one_hot_vocabs: dict[str, list[str]] = field(default_factory=dict)
    text_attrs: list[str] = field(default_factory=list)
    tfidf_terms: list[str] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        one_hot = sum(len(self.one_hot_vocabs[a]) for a in self.one_hot_attrs)
        return 2 * len(self.vitals) + one_hot + len(self.tfidf_terms)

    def segment_offsets(self) -> dict[str, int]:
        """Start offset of each named segment, partitioning [0, dimension)."""
        offsets = {"vitals": 0}
        cursor = 2 * len(self.vitals)
        for attr in self.one_hot_attrs:
            offsets[f"one_hot:{attr}"] = cursor
            cursor += len(self.one_hot_vocabs[attr])
        offsets["tfidf"] = cursor
        return offsets

    def to_dict(self) -> dict:
        return {
            "schema_id": self.schema_id,
            "vitals": [
                {"kind": s.kind.value, "norm_min": s.norm_min, "norm_max": s.norm_max}
                for s in self.vitals
            ],
            "one_hot_attrs": self.one_hot_attrs,
            "one_hot_vocabs": self.one_hot_vocabs,
            "text_attrs": self.text_attrs,
            "tfidf_terms": self.tfidf_terms,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FeatureSchema":
        return cls(
            schema_id=payload["schema_id"],
            vitals=[
                VitalSlot(VitalKind(v["kind"]), v["norm_min"], v["norm_max"])
                for v in payload["vitals"]
            ],
            one_hot_attrs=list(payload.get("one_hot_attrs", [])),
            one_hot_vocabs={k: list(v) for k, v in payload.get("one_hot_vocabs", {}).items()},
            text_attrs=list(payload.get("text_attrs", [])),
            tfidf_terms=list(payload.get("tfidf_terms", [])),
        )


@dataclass
class FeatureVector:
    values: np.ndarray
    schema_id: str

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(self.values)):
            raise ValueError("feature vector contains non-finite entries")


def build_feature_schema(
    dictionary: DataDictionary,
    scheme: EncodingScheme,
    tfidf: Optional[TfIdfModel],
    top_k: int = DEFAULT_TFIDF_TOP_K,
    schema_id: str = "schema-1",
) -> FeatureSchema:
    """Derive a schema from fitted encoders.

    Vital slots come from numeric dictionary entries named after a vital
    kind, in enum declaration order; their normalization span is the
    attribute's allowed range. Categorical columns become one-hot blocks in
    sorted order; text columns are concatenated into the TF-IDF document.
    """
    vital_names = {kind.value: kind for kind in VitalKind}
    slots = []
    for kind in VitalKind:
        descriptor = dictionary.entries.get(kind.value)
        if descriptor is None or descriptor.semantic_type != "numeric":
            continue
        lo, hi = descriptor.allowed_range if descriptor.allowed_range else (0.0, 1.0)
        if not lo < hi:
            lo, hi = lo - 0.5, hi + 0.5
        slots.append(VitalSlot(kind=vital_names[kind.value], norm_min=lo, norm_max=hi))

    excluded = EXCLUDED_FEATURE_COLUMNS
    one_hot_attrs = []
    for attr in sorted(dictionary.categorical_columns()):
        if attr in excluded:
            continue
        if attr not in scheme.one_hot_vocabs:
            raise SchemaMismatchError(f"encoding scheme lacks a vocabulary for {attr!r}")
        if scheme.one_hot_vocabs[attr]:
            one_hot_attrs.append(attr)

    text_attrs = sorted(a for a in dictionary.text_columns() if a not in excluded)
    terms = tfidf.top_terms_by_idf(top_k) if tfidf is not None else []
    return FeatureSchema(
        schema_id=schema_id,
        vitals=slots,
        one_hot_attrs=one_hot_attrs,
        one_hot_vocabs={a: list(scheme.one_hot_vocabs[a]) for a in one_hot_attrs},
        text_attrs=text_attrs,
        tfidf_terms=terms,
    )


def assemble_features(
    vitals: Mapping[VitalKind, float],
    texts: Mapping[str, str],
    scheme: EncodingScheme,
    tfidf: Optional[TfIdfModel],
    schema: FeatureSchema,
) -> FeatureVector:
    """Place a vitals snapshot and text values into the schema layout.

    Vitals are min-max normalized into [0, 1] and clamped; a missing vital
    puts 0.5 in its value slot and raises its paired missing flag so the
    network can tell absence from a mid-range reading. ``texts`` maps
    attribute names to raw strings: categorical attributes are looked up in
    their vocabularies, text attributes feed one concatenated document
    through the TF-IDF model.
    """
    for attr in schema.one_hot_attrs:
        vocab = scheme.one_hot_vocabs.get(attr)
        if vocab is None or list(vocab) != schema.one_hot_vocabs[attr]:
            raise SchemaMismatchError(f"scheme and schema disagree on vocabulary for {attr!r}")
    if schema.tfidf_terms:
        if tfidf is None:
            raise SchemaMismatchError("schema declares TF-IDF terms but no model was given")
        for term in schema.tfidf_terms:
            if tfidf.term_index(term) < 0:
                raise SchemaMismatchError(f"TF-IDF model lacks schema term {term!r}")

    parts = []
    for slot in schema.vitals:
        value = vitals.get(slot.kind)
        if value is None:
            parts.extend((MISSING_VITAL_FILL, 1.0))
        else:
            span = slot.norm_max - slot.norm_min
            parts.extend((min(1.0, max(0.0, (float(value) - slot.norm_min) / span)), 0.0))

    vector = np.array(parts, dtype=np.float64)
    blocks = [vector]
    for attr in schema.one_hot_attrs:
        blocks.append(one_hot_encode(texts.get(attr), schema.one_hot_vocabs[attr]))

    if schema.tfidf_terms:
        document = " ".join(str(texts.get(a, "") or "") for a in schema.text_attrs)
        weights = transform_tfidf(document, tfidf)
        blocks.append(np.array([weights.get(t, 0.0) for t in schema.tfidf_terms], dtype=np.float64))

    values = np.concatenate(blocks) if blocks else np.zeros(0)
    return FeatureVector(values=values, schema_id=schema.schema_id)

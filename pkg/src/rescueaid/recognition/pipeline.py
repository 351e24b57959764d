"""End-to-end glue from case tables to trained, shippable model bundles.

A bundle is one JSON file holding the network, the feature schema, and the
fitted encoders (one-hot vocabularies and TF-IDF model). The service loads a
bundle and can assemble features for live snapshots exactly the way training
did.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from rescueaid.case_data.dictionary import DataDictionary, build_dictionary, parse_number
from rescueaid.case_data.encoding import EncodingScheme, build_encoding_scheme
from rescueaid.case_data.filtering import filter_cases
from rescueaid.case_data.tables import Table
from rescueaid.case_data.tfidf import TfIdfModel, fit_tfidf
from rescueaid.groups import ComplicationGroup, VitalKind
from rescueaid.recognition.features import (
    DEFAULT_TFIDF_TOP_K,
    EXCLUDED_FEATURE_COLUMNS,
    FeatureSchema,
    assemble_features,
    build_feature_schema,
)
from rescueaid.recognition.network import MlpModel

BUNDLE_FORMAT_VERSION = "1.0"


@dataclass
class FittedPipeline:
    """Everything fitted on a training table, short of the network."""

    dictionary: DataDictionary
    scheme: EncodingScheme
    tfidf: Optional[TfIdfModel]
    schema: FeatureSchema


def fit_pipeline(
    table: Table,
    dictionary: Optional[DataDictionary] = None,
    top_k: int = DEFAULT_TFIDF_TOP_K,
    schema_id: str = "schema-1",
) -> FittedPipeline:
    """Profile, filter, and fit encoders on a labeled case table."""
    dictionary = dictionary or build_dictionary(table)
    filtered, _ = filter_cases(table, dictionary)
    scheme = build_encoding_scheme(filtered, dictionary)

    # must match the schema's text attributes, or fitted idf ranks terms
    # the live document can never contain
    text_columns = sorted(c for c in dictionary.text_columns() if c not in EXCLUDED_FEATURE_COLUMNS)
    corpus = []
    for row in filtered.rows:
        document = " ".join(str(row.get(c, "") or "") for c in text_columns).strip()
        if document:
            corpus.append(document)
    tfidf = fit_tfidf(corpus) if corpus else None

    schema = build_feature_schema(dictionary, scheme, tfidf, top_k=top_k, schema_id=schema_id)
    return FittedPipeline(dictionary=dictionary, scheme=scheme, tfidf=tfidf, schema=schema)


def features_from_table(table: Table, pipeline: FittedPipeline) -> tuple[np.ndarray, np.ndarray]:
    """Assemble the (X, labels) training matrices from a labeled table.

    Records carrying several labels contribute their lowest-ordinal group,
    a documented simplification of the multi-label reality.
    """
    schema = pipeline.schema
    rows_x, rows_y = [], []
    text_like = set(schema.one_hot_attrs) | set(schema.text_attrs)
    for row in table.rows:
        vitals = {}
        for slot in schema.vitals:
            value = parse_number(row.get(slot.kind.value))
            if value is not None:
                vitals[slot.kind] = value
        texts = {attr: str(row[attr]) for attr in text_like if row.get(attr) is not None}
        vector = assemble_features(vitals, texts, pipeline.scheme, pipeline.tfidf, schema)
        rows_x.append(vector.values)

        raw = str(row.get("labels", "") or "")
        groups = [ComplicationGroup.from_id(t.strip()) for t in raw.split(";") if t.strip()]
        group = min(groups, key=lambda g: g.ordinal) if groups else ComplicationGroup.OTHER_SPECIAL
        rows_y.append(group.ordinal)
    return np.array(rows_x, dtype=np.float64), np.array(rows_y, dtype=np.int64)


@dataclass
class ModelBundle:
    """A trained network plus the artifacts needed to feed it."""

    model: MlpModel
    schema: FeatureSchema
    scheme: EncodingScheme
    tfidf: Optional[TfIdfModel]

    def classify_snapshot(self, vitals: dict[VitalKind, float], texts: Optional[dict[str, str]] = None, produced_at: int = 0):
        from rescueaid.recognition.network import classify

        vector = assemble_features(vitals, texts or {}, self.scheme, self.tfidf, self.schema)
        return classify(self.model, vector, produced_at=produced_at)

    def to_json(self) -> str:
        return json.dumps(
            {
                "format_version": BUNDLE_FORMAT_VERSION,
                "model": json.loads(self.model.to_json()),
                "schema": self.schema.to_dict(),
                "scheme": json.loads(self.scheme.to_json()),
                "tfidf": json.loads(self.tfidf.to_json()) if self.tfidf else None,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ModelBundle":
        payload = json.loads(text)
        version = payload.get("format_version", "")
        if version.split(".")[0] != BUNDLE_FORMAT_VERSION.split(".")[0]:
            raise ValueError(f"unsupported bundle format version {version!r}")
        tfidf_raw = payload.get("tfidf")
        return cls(
            model=MlpModel.from_json(json.dumps(payload["model"])),
            schema=FeatureSchema.from_dict(payload["schema"]),
            scheme=EncodingScheme.from_json(json.dumps(payload["scheme"])),
            tfidf=TfIdfModel.from_json(json.dumps(tfidf_raw)) if tfidf_raw else None,
        )

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ModelBundle":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

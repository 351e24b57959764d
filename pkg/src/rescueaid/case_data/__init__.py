"""Case-data pipeline: merge, filter, profile, label, and encode rescue cases.

The pipeline is pure batch transformation code: CSV tables in, feature
matrices out. All operations are deterministic and reentrant; nothing here
holds shared mutable state.
"""

from rescueaid.case_data.dictionary import (
    AttributeDescriptor,
    DataDictionary,
    build_dictionary,
)
from rescueaid.case_data.encoding import EncodingScheme, build_encoding_scheme, one_hot_encode
from rescueaid.case_data.filtering import FilterReport, filter_cases
from rescueaid.case_data.labels import LabelRule, LabelRuleError, assign_labels, load_label_rules
from rescueaid.case_data.records import CaseRecord, VitalReading, record_from_row
from rescueaid.case_data.tables import MergeReport, Table, merge_case_tables
from rescueaid.case_data.tfidf import TfIdfModel, fit_tfidf, tokenize, transform_tfidf

__all__ = [
    "AttributeDescriptor",
    "CaseRecord",
    "DataDictionary",
    "EncodingScheme",
    "FilterReport",
    "LabelRule",
    "LabelRuleError",
    "MergeReport",
    "Table",
    "TfIdfModel",
    "VitalReading",
    "assign_labels",
    "build_dictionary",
    "build_encoding_scheme",
    "filter_cases",
    "fit_tfidf",
    "load_label_rules",
    "merge_case_tables",
    "one_hot_encode",
    "record_from_row",
    "tokenize",
    "transform_tfidf",
]

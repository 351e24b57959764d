"""EPC-style treatment graphs: parsing, validation, queries, storage."""

from rescueaid.treatment.guards import (
    AnswerEquals,
    BoolOp,
    GuardSyntaxError,
    NotOp,
    Truth,
    TrueLiteral,
    VitalComparison,
    eval_guard,
    guard_depth,
    guard_to_text,
    parse_guard,
    unknown_needs,
)
from rescueaid.treatment.model import (
    DataContext,
    EpcEdge,
    EpcNode,
    NodeKind,
    TreatmentGraph,
)
from rescueaid.treatment.parser import SopError, SopParseError, parse_sop
from rescueaid.treatment.registry import GraphRegistry
from rescueaid.treatment.store import (
    ChecksumError,
    GraphStoreError,
    VersionError,
    deserialize,
    serialize,
)
from rescueaid.treatment.traversal import NextActions, PendingItem, enumerate_paths, next_actions
from rescueaid.treatment.validation import Finding, ValidationReport, validate_epc

__all__ = [
    "AnswerEquals",
    "BoolOp",
    "ChecksumError",
    "DataContext",
    "EpcEdge",
    "EpcNode",
    "Finding",
    "GraphRegistry",
    "GraphStoreError",
    "GuardSyntaxError",
    "NextActions",
    "NodeKind",
    "NotOp",
    "PendingItem",
    "SopError",
    "SopParseError",
    "TreatmentGraph",
    "Truth",
    "TrueLiteral",
    "ValidationReport",
    "VersionError",
    "VitalComparison",
    "deserialize",
    "enumerate_paths",
    "eval_guard",
    "guard_depth",
    "guard_to_text",
    "next_actions",
    "parse_guard",
    "parse_sop",
    "serialize",
    "unknown_needs",
    "validate_epc",
]

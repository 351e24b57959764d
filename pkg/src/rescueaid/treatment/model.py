"""Graph node/edge model, the treatment graph container, and live data context."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from rescueaid.groups import ComplicationGroup, VitalKind
from rescueaid.treatment.guards import GuardExpr


class NodeKind(enum.Enum):
    START_EVENT = "StartEvent"
    EVENT = "Event"
    FUNCTION = "Function"
    XOR_SPLIT = "XorSplit"
    XOR_JOIN = "XorJoin"
    AND_SPLIT = "AndSplit"
    AND_JOIN = "AndJoin"
    OR_SPLIT = "OrSplit"
    OR_JOIN = "OrJoin"
    END_EVENT = "EndEvent"


#: Kinds that behave as states (the "event" side of the alternation rule).
EVENT_KINDS = {NodeKind.START_EVENT, NodeKind.EVENT, NodeKind.END_EVENT}

#: Logical connectors; transparent to the alternation rule.
CONNECTOR_KINDS = {
    NodeKind.XOR_SPLIT,
    NodeKind.XOR_JOIN,
    NodeKind.AND_SPLIT,
    NodeKind.AND_JOIN,
    NodeKind.OR_SPLIT,
    NodeKind.OR_JOIN,
}

SPLIT_KINDS = {NodeKind.XOR_SPLIT, NodeKind.AND_SPLIT, NodeKind.OR_SPLIT}
JOIN_KINDS = {NodeKind.XOR_JOIN, NodeKind.AND_JOIN, NodeKind.OR_JOIN}

#: Splits whose outgoing edges must carry guards.
GUARDED_SPLIT_KINDS = {NodeKind.XOR_SPLIT, NodeKind.OR_SPLIT}


@dataclass
class EpcNode:
    id: str
    kind: NodeKind
    label: str = ""
    question: Optional[str] = None  # question id a Function asks the operator

    def is_connector(self) -> bool:
        return self.kind in CONNECTOR_KINDS


@dataclass
class EpcEdge:
    source: str
    target: str
    guard: Optional[GuardExpr] = None


@dataclass
class TreatmentGraph:
    """Validated EPC graph plus start-node bindings per complication group."""

    graph_id: str
    nodes: dict[str, EpcNode] = field(default_factory=dict)
    edges: list[EpcEdge] = field(default_factory=list)
    start_bindings: dict[ComplicationGroup, list[str]] = field(default_factory=dict)
    questions: dict[str, str] = field(default_factory=dict)  # id -> display text
    metadata: dict[str, str] = field(default_factory=dict)

    def out_edges(self, node_id: str) -> list[EpcEdge]:
        return [e for e in self.edges if e.source == node_id]

    def in_edges(self, node_id: str) -> list[EpcEdge]:
        return [e for e in self.edges if e.target == node_id]

    def node(self, node_id: str) -> EpcNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise KeyError(f"graph {self.graph_id!r} has no node {node_id!r}") from None

    def start_nodes_for(self, group: ComplicationGroup) -> list[str]:
        """Bound StartEvent ids in declaration order; empty when unbound."""
        return list(self.start_bindings.get(group, []))

    def structurally_equal(self, other: "TreatmentGraph") -> bool:
        from rescueaid.treatment.guards import guard_to_text

        def edge_key(edge: EpcEdge):
            return (edge.source, edge.target, guard_to_text(edge.guard) if edge.guard else None)

        return (
            self.graph_id == other.graph_id
            and {i: (n.kind, n.label, n.question) for i, n in self.nodes.items()}
            == {i: (n.kind, n.label, n.question) for i, n in other.nodes.items()}
            and [edge_key(e) for e in self.edges] == [edge_key(e) for e in other.edges]
            and self.start_bindings == other.start_bindings
            and self.questions == other.questions
            and self.metadata == other.metadata
        )


@dataclass
class DataContext:
    """Latest vitals snapshot plus operator answers, fed to guard evaluation."""

    vitals: dict[VitalKind, tuple[float, int]] = field(default_factory=dict)  # kind -> (value, at ms)
    answers: dict[str, str] = field(default_factory=dict)

    def set_vital(self, kind: VitalKind, value: float, at: int) -> None:
        """Record a reading; stale timestamps never overwrite newer data."""
        current = self.vitals.get(kind)
        if current is None or at >= current[1]:
            self.vitals[kind] = (float(value), int(at))

    def set_answer(self, question_id: str, value: str) -> None:
        self.answers[question_id] = str(value)

    def vital(self, kind: VitalKind) -> Optional[float]:
        entry = self.vitals.get(kind)
        return entry[0] if entry else None

    def answer(self, question_id: str) -> Optional[str]:
        return self.answers.get(question_id)

    def to_dict(self) -> dict:
        return {
            "vitals": {kind.value: [value, at] for kind, (value, at) in sorted(self.vitals.items(), key=lambda kv: kv[0].value)},
            "answers": dict(sorted(self.answers.items())),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "DataContext":
        ctx = cls()
        for kind_id, (value, at) in payload.get("vitals", {}).items():
            ctx.vitals[VitalKind(kind_id)] = (float(value), int(at))
        ctx.answers = {k: str(v) for k, v in payload.get("answers", {}).items()}
        return ctx

"""EPC well-formedness checks with stable rule ids.

Rule ids are part of the contract: tests and violation fixtures pin them.

=================  ========================================================
rule id            meaning
=================  ========================================================
alternation        Events and Functions must strictly alternate along paths
                   (connectors are transparent)
split-arity        splits need >= 2 outgoing edges, joins >= 2 incoming
xor-guard-overlap  two XorSplit guards are decidably satisfiable together
xor-guard-undec    XorSplit guard exclusivity undecidable (warning)
unreachable        node unreachable from every StartEvent
no-end-path        node cannot reach any EndEvent
guard-placement    guard missing on an Xor/Or split edge, or present on an
                   edge that must not carry one
terminal-edges     StartEvent has incoming or EndEvent has outgoing edges
=================  ========================================================
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from rescueaid.treatment.guards import AnswerEquals, GuardExpr, VitalComparison
from rescueaid.treatment.model import (
    EVENT_KINDS,
    GUARDED_SPLIT_KINDS,
    JOIN_KINDS,
    NodeKind,
    SPLIT_KINDS,
    TreatmentGraph,
)

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    severity: str
    subject: str  # node id or "source->target" for edges
    rule: str
    message: str


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    def ok(self) -> bool:
        return not any(f.severity == ERROR for f in self.findings)

    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == ERROR]

    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == WARNING]

    def rule_ids(self) -> set[str]:
        return {f.rule for f in self.findings if f.severity == ERROR}

    def add(self, severity: str, subject: str, rule: str, message: str) -> None:
        self.findings.append(Finding(severity, subject, rule, message))


def _interval(expr: GuardExpr) -> Optional[tuple[str, float, float, bool, bool]]:
    """(vital, lo, hi, lo_closed, hi_closed) for a single comparison, else None."""
    if not isinstance(expr, VitalComparison):
        return None
    inf = float("inf")
    if expr.op == "<":
        return (expr.kind.value, -inf, expr.threshold, False, False)
    if expr.op == "<=":
        return (expr.kind.value, -inf, expr.threshold, False, True)
    if expr.op == ">":
        return (expr.kind.value, expr.threshold, inf, False, False)
    if expr.op == ">=":
        return (expr.kind.value, expr.threshold, inf, True, False)
    return (expr.kind.value, expr.threshold, expr.threshold, True, True)


def _intervals_overlap(a, b) -> bool:
    _, a_lo, a_hi, a_lo_closed, a_hi_closed = a
    _, b_lo, b_hi, b_lo_closed, b_hi_closed = b
    left = a_lo < b_hi or (a_lo == b_hi and a_lo_closed and b_hi_closed)
    right = b_lo < a_hi or (b_lo == a_hi and b_lo_closed and a_hi_closed)
    return left and right


def _guard_exclusive(a: GuardExpr, b: GuardExpr) -> Optional[bool]:
    """True = decidably exclusive, False = decidably overlapping, None = unknown."""
    interval_a, interval_b = _interval(a), _interval(b)
    if interval_a and interval_b and interval_a[0] == interval_b[0]:
        return not _intervals_overlap(interval_a, interval_b)
    if isinstance(a, AnswerEquals) and isinstance(b, AnswerEquals) and a.question_id == b.question_id:
        return a.value != b.value
    return None


def _connector_hops(graph: TreatmentGraph, node_id: str) -> list[str]:
    """Next non-connector nodes reachable through connectors only."""
    result: list[str] = []
    seen = {node_id}
    queue = deque(edge.target for edge in graph.out_edges(node_id))
    while queue:
        current = queue.popleft()
        if current in seen or current not in graph.nodes:
            continue
        seen.add(current)
        if graph.nodes[current].is_connector():
            queue.extend(edge.target for edge in graph.out_edges(current))
        else:
            result.append(current)
    return result


def _reachable(graph: TreatmentGraph, sources: list[str], forward: bool) -> set[str]:
    seen = set(sources)
    queue = deque(sources)
    while queue:
        current = queue.popleft()
        edges = graph.out_edges(current) if forward else graph.in_edges(current)
        for edge in edges:
            neighbor = edge.target if forward else edge.source
            if neighbor not in seen and neighbor in graph.nodes:
                seen.add(neighbor)
                queue.append(neighbor)
    return seen


def validate_epc(graph: TreatmentGraph) -> ValidationReport:
    """Run every structural rule; the report carries all findings."""
    report = ValidationReport()

    for node in graph.nodes.values():
        if node.kind is NodeKind.START_EVENT and graph.in_edges(node.id):
            report.add(ERROR, node.id, "terminal-edges", "StartEvent must have no incoming edges")
        if node.kind is NodeKind.END_EVENT and graph.out_edges(node.id):
            report.add(ERROR, node.id, "terminal-edges", "EndEvent must have no outgoing edges")

    for node in graph.nodes.values():
        if node.kind in SPLIT_KINDS and len(graph.out_edges(node.id)) < 2:
            report.add(ERROR, node.id, "split-arity", f"{node.kind.value} needs at least 2 outgoing edges")
        if node.kind in JOIN_KINDS and len(graph.in_edges(node.id)) < 2:
            report.add(ERROR, node.id, "split-arity", f"{node.kind.value} needs at least 2 incoming edges")

    for edge in graph.edges:
        source = graph.nodes.get(edge.source)
        if source is None:
            continue
        subject = f"{edge.source}->{edge.target}"
        if source.kind in GUARDED_SPLIT_KINDS and edge.guard is None:
            report.add(ERROR, subject, "guard-placement", f"edge leaving {source.kind.value} needs a guard")
        if source.kind not in GUARDED_SPLIT_KINDS and edge.guard is not None:
            report.add(ERROR, subject, "guard-placement", "guard is only allowed on Xor/Or split edges")

    # alternation: step over connectors, compare node classes
    for node in graph.nodes.values():
        if node.is_connector():
            continue
        here_is_event = node.kind in EVENT_KINDS
        for successor_id in _connector_hops(graph, node.id):
            successor = graph.nodes[successor_id]
            if successor.is_connector():
                continue
            if (successor.kind in EVENT_KINDS) == here_is_event:
                kind_name = "Events" if here_is_event else "Functions"
                report.add(
                    ERROR,
                    f"{node.id}->{successor_id}",
                    "alternation",
                    f"{kind_name} may not follow each other directly",
                )

    for node in graph.nodes.values():
        if node.kind is not NodeKind.XOR_SPLIT:
            continue
        out = graph.out_edges(node.id)
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                guard_i, guard_j = out[i].guard, out[j].guard
                if guard_i is None or guard_j is None:
                    continue  # guard-placement already flags this
                exclusive = _guard_exclusive(guard_i, guard_j)
                subject = f"{node.id}:{out[i].target}|{out[j].target}"
                if exclusive is False:
                    report.add(ERROR, subject, "xor-guard-overlap", "XorSplit guards can be true together")
                elif exclusive is None:
                    report.add(WARNING, subject, "xor-guard-undec", "guard exclusivity is undecidable syntactically")

    starts = [n.id for n in graph.nodes.values() if n.kind is NodeKind.START_EVENT]
    ends = [n.id for n in graph.nodes.values() if n.kind is NodeKind.END_EVENT]
    from_starts = _reachable(graph, starts, forward=True)
    to_ends = _reachable(graph, ends, forward=False)
    for node_id in graph.nodes:
        if node_id not in from_starts:
            report.add(ERROR, node_id, "unreachable", "not reachable from any StartEvent")
        if node_id not in to_ends:
            report.add(ERROR, node_id, "no-end-path", "cannot reach any EndEvent")

    return report

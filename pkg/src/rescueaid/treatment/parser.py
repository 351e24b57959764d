"""Line-oriented SOP markup parser.

The markup is the structured stand-in for mining treatment instructions out
of PDFs: one directive per line, ``#`` comments, order-preserving. Grammar
(EBNF in docs/sop-format.md):

    node <id> <kind> "<label>" [question: <question-id>]
    edge <from> <to> [guard: <guard-expression>]
    bind <group-id> <start-node-id>
    question <id> "<text>"
    meta <key> "<value>"

Parsing is total: the caller gets either a graph or the full list of
positioned errors, never a half-graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from rescueaid.groups import ComplicationGroup
from rescueaid.treatment.guards import GuardSyntaxError, parse_guard
from rescueaid.treatment.model import EpcEdge, EpcNode, NodeKind, TreatmentGraph


@dataclass(frozen=True)
class SopError:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


class SopParseError(ValueError):
    def __init__(self, errors: list[SopError]):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


_IDENT = r"[A-Za-z_][A-Za-z0-9_-]*"
_NODE_RE = re.compile(
    rf'^node\s+(?P<id>{_IDENT})\s+(?P<kind>{_IDENT})\s+"(?P<label>[^"]*)"'
    rf"(?:\s+question:\s*(?P<question>{_IDENT}))?\s*$"
)
_EDGE_RE = re.compile(
    rf"^edge\s+(?P<source>{_IDENT})\s+(?P<target>{_IDENT})(?:\s+guard:\s*(?P<guard>.+?))?\s*$"
)
_BIND_RE = re.compile(rf"^bind\s+(?P<group>{_IDENT})\s+(?P<start>{_IDENT})\s*$")
_QUESTION_RE = re.compile(rf'^question\s+(?P<id>{_IDENT})\s+"(?P<text>[^"]*)"\s*$')
_META_RE = re.compile(rf'^meta\s+(?P<key>{_IDENT})\s+"(?P<value>[^"]*)"\s*$')


def parse_sop(document: str, graph_id: str = "") -> TreatmentGraph:
    """Parse SOP markup into a treatment graph.

    Raises :class:`SopParseError` carrying every positioned error found:
    syntax problems, duplicate node ids, dangling edge endpoints, bad
    bindings. Structural validation beyond that (alternation, reachability,
    guard placement) is :func:`rescueaid.treatment.validation.validate_epc`'s
    job.
    """
    errors: list[SopError] = []
    nodes: dict[str, EpcNode] = {}
    node_lines: dict[str, int] = {}
    edges: list[tuple[int, EpcEdge]] = []
    bindings: dict[ComplicationGroup, list[str]] = {}
    binding_lines: list[tuple[int, ComplicationGroup, str]] = []
    questions: dict[str, str] = {}
    metadata: dict[str, str] = {}

    for line_number, raw in enumerate(document.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        directive = line.split(None, 1)[0]

        if directive == "node":
            match = _NODE_RE.match(line)
            if not match:
                errors.append(SopError(line_number, 1, "malformed node directive"))
                continue
            node_id = match.group("id")
            if node_id in nodes:
                errors.append(
                    SopError(line_number, 1, f"duplicate node id {node_id!r} (first on line {node_lines[node_id]})")
                )
                continue
            try:
                kind = NodeKind(match.group("kind"))
            except ValueError:
                errors.append(SopError(line_number, 1, f"unknown node kind {match.group('kind')!r}"))
                continue
            nodes[node_id] = EpcNode(
                id=node_id, kind=kind, label=match.group("label"), question=match.group("question")
            )
            node_lines[node_id] = line_number

        elif directive == "edge":
            match = _EDGE_RE.match(line)
            if not match:
                errors.append(SopError(line_number, 1, "malformed edge directive"))
                continue
            guard = None
            guard_text = match.group("guard")
            if guard_text is not None:
                try:
                    guard = parse_guard(guard_text)
                except GuardSyntaxError as exc:
                    offset = line.index(guard_text)
                    errors.append(SopError(line_number, offset + exc.column, f"bad guard: {exc}"))
                    continue
            edges.append((line_number, EpcEdge(match.group("source"), match.group("target"), guard)))

        elif directive == "bind":
            match = _BIND_RE.match(line)
            if not match:
                errors.append(SopError(line_number, 1, "malformed bind directive"))
                continue
            try:
                group = ComplicationGroup.from_id(match.group("group"))
            except ValueError as exc:
                errors.append(SopError(line_number, 1, str(exc)))
                continue
            binding_lines.append((line_number, group, match.group("start")))

        elif directive == "question":
            match = _QUESTION_RE.match(line)
            if not match:
                errors.append(SopError(line_number, 1, "malformed question directive"))
                continue
            questions[match.group("id")] = match.group("text")

        elif directive == "meta":
            match = _META_RE.match(line)
            if not match:
                errors.append(SopError(line_number, 1, "malformed meta directive"))
                continue
            metadata[match.group("key")] = match.group("value")

        else:
            errors.append(SopError(line_number, 1, f"unknown directive {directive!r}"))

    # Referential checks once all declarations are in (forward refs are fine).
    for line_number, edge in edges:
        for endpoint in (edge.source, edge.target):
            if endpoint not in nodes:
                errors.append(SopError(line_number, 1, f"edge references undeclared node {endpoint!r}"))
    for line_number, group, start_id in binding_lines:
        node = nodes.get(start_id)
        if node is None:
            errors.append(SopError(line_number, 1, f"binding references undeclared node {start_id!r}"))
        elif node.kind is not NodeKind.START_EVENT:
            errors.append(SopError(line_number, 1, f"binding target {start_id!r} is not a StartEvent"))
        else:
            bindings.setdefault(group, []).append(start_id)
    for node in nodes.values():
        if node.question is not None and node.question not in questions:
            errors.append(
                SopError(node_lines[node.id], 1, f"node {node.id!r} references undeclared question {node.question!r}")
            )

    if errors:
        raise SopParseError(errors)

    return TreatmentGraph(
        graph_id=graph_id or metadata.get("graph_id", metadata.get("title", "graph")),
        nodes=nodes,
        edges=[edge for _, edge in edges],
        start_bindings=bindings,
        questions=questions,
        metadata=metadata,
    )


def load_sop(path: Union[str, Path]) -> TreatmentGraph:
    path = Path(path)
    return parse_sop(path.read_text(encoding="utf-8"), graph_id=path.stem)

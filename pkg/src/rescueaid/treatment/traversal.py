"""Positional queries: next actionable Functions and path enumeration.

``next_actions`` is the live query the recommendation engine leans on. It
walks forward from a position through Events and connectors until it rests
on Functions (actionable), EndEvents (treatment complete), or splits it
cannot decide yet. Undecidable splits stop the walk and surface their
missing vitals and unanswered questions as pending items: this is the
question/answer loop with the operator.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from rescueaid.treatment.guards import Truth, eval_guard, unknown_needs
from rescueaid.treatment.model import DataContext, NodeKind, TreatmentGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PendingItem:
    """A datum the walk is blocked on: an unanswered question or missing vital."""

    kind: str  # "question" | "vital"
    identifier: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "id": self.identifier}


@dataclass
class NextActions:
    functions: list[str] = field(default_factory=list)
    pending: list[PendingItem] = field(default_factory=list)
    completed: bool = False  # an EndEvent was reached
    resting: list[str] = field(default_factory=list)  # functions, end events, stuck splits


def _append_unique(items: list, value) -> None:
    if value not in items:
        items.append(value)


def next_actions(graph: TreatmentGraph, position: str, ctx: DataContext) -> NextActions:
    """Walk forward from ``position`` and collect the next Functions.

    Connector behavior: XorSplit follows the first declared edge whose
    guard is true (several true guards are logged and the first wins, so a
    live session never stalls); AndSplit follows every edge; OrSplit
    follows every true edge. A split with no true guard but at least one
    Unknown rests in place and reports what data would decide it. Joins
    pass through. Events pass through; a Function or EndEvent ends its
    branch of the walk.
    """
    start = graph.node(position)  # raises KeyError for unknown positions
    result = NextActions()
    visited: set[str] = set()

    queue: deque[str] = deque()
    if start.is_connector():
        queue.append(position)
    else:
        queue.extend(edge.target for edge in graph.out_edges(position))

    while queue:
        node_id = queue.popleft()
        if node_id in visited:
            continue
        visited.add(node_id)
        node = graph.node(node_id)

        if node.kind is NodeKind.FUNCTION:
            _append_unique(result.functions, node_id)
            _append_unique(result.resting, node_id)
        elif node.kind is NodeKind.END_EVENT:
            result.completed = True
            _append_unique(result.resting, node_id)
        elif node.kind in (NodeKind.EVENT, NodeKind.START_EVENT):
            queue.extend(edge.target for edge in graph.out_edges(node_id))
        elif node.kind in (NodeKind.XOR_JOIN, NodeKind.AND_JOIN, NodeKind.OR_JOIN):
            queue.extend(edge.target for edge in graph.out_edges(node_id))
        elif node.kind is NodeKind.AND_SPLIT:
            queue.extend(edge.target for edge in graph.out_edges(node_id))
        elif node.kind is NodeKind.XOR_SPLIT:
            out = graph.out_edges(node_id)
            truths = [eval_guard(e.guard, ctx) if e.guard else Truth.UNKNOWN for e in out]
            true_edges = [e for e, t in zip(out, truths) if t is Truth.TRUE]
            if true_edges:
                if len(true_edges) > 1:
                    logger.warning(
                        "XorSplit %s: %d guards true simultaneously; first declared edge wins",
                        node_id,
                        len(true_edges),
                    )
                queue.append(true_edges[0].target)
            elif any(t is Truth.UNKNOWN for t in truths):
                _append_unique(result.resting, node_id)
                for edge, truth in zip(out, truths):
                    if truth is Truth.UNKNOWN and edge.guard is not None:
                        for kind, identifier in unknown_needs(edge.guard, ctx):
                            _append_unique(result.pending, PendingItem(kind, identifier))
            else:
                logger.warning("XorSplit %s: all guards false, no branch taken", node_id)
        elif node.kind is NodeKind.OR_SPLIT:
            out = graph.out_edges(node_id)
            truths = [eval_guard(e.guard, ctx) if e.guard else Truth.UNKNOWN for e in out]
            followed = False
            for edge, truth in zip(out, truths):
                if truth is Truth.TRUE:
                    queue.append(edge.target)
                    followed = True
            unknowns = [e for e, t in zip(out, truths) if t is Truth.UNKNOWN]
            if unknowns:
                _append_unique(result.resting, node_id)
                for edge in unknowns:
                    if edge.guard is not None:
                        for kind, identifier in unknown_needs(edge.guard, ctx):
                            _append_unique(result.pending, PendingItem(kind, identifier))
            elif not followed:
                logger.warning("OrSplit %s: all guards false, no branch taken", node_id)

    return result


def enumerate_paths(graph: TreatmentGraph, start: str, max_depth: int) -> list[list[str]]:
    """Depth-limited simple paths from ``start``.

    Every split contributes one branch per path (a path is a single node
    sequence, so AndSplit branches enumerate separately too). A path ends
    at an EndEvent, at the depth cutoff, or when it cannot be extended
    without repeating a node. Paths come out in edge-declaration order.
    """
    graph.node(start)
    paths: list[list[str]] = []

    def extend(path: list[str]) -> None:
        current = path[-1]
        node = graph.node(current)
        if node.kind is NodeKind.END_EVENT or len(path) >= max_depth:
            paths.append(list(path))
            return
        extensions = [e.target for e in graph.out_edges(current) if e.target not in path]
        if not extensions:
            paths.append(list(path))
            return
        for target in extensions:
            path.append(target)
            extend(path)
            path.pop()

    if max_depth >= 1:
        extend([start])
    return paths

"""Engine operations on one session.

The engine is single-threaded per session by contract: the service wraps
each session in a lock and funnels classifier updates and operator commands
through it in arrival order. Everything here is deterministic given the
input event order, which is what makes session replay exact.

Positioning model: ``positions`` is the list of nodes where the treatment
"tokens" rest: Functions awaiting confirmation, splits blocked on missing
data, or EndEvents. The set is recomputed from the active start node, the
log of confirmed actions since the last rebind, and the current data
context: confirmed Functions are passed through, everything else rests.
Because an unconfirmed offer is never committed, overwriting an answer or
receiving fresh vitals re-routes pending branches exactly as a fresh
session with the same context would.
"""

from __future__ import annotations

import logging
import uuid
from collections import deque
from typing import Optional

import numpy as np

from rescueaid.groups import NUM_GROUPS, ComplicationGroup, VitalKind
from rescueaid.recognition.network import ComplicationDistribution
from rescueaid.treatment.model import NodeKind, TreatmentGraph
from rescueaid.treatment.registry import GraphRegistry
from rescueaid.treatment.traversal import next_actions
from rescueaid.engine.state import (
    ActionLogEntry,
    Alternate,
    Recommendation,
    SessionState,
    SwitchPolicy,
    SwitchSuggestion,
)

logger = logging.getLogger(__name__)


class NoStartBound(ValueError):
    """No group in the distribution has a start binding in the registry."""


class ActionNotOffered(ValueError):
    """Confirmed node is not among the currently actionable Functions."""


class UnknownQuestion(ValueError):
    """Answered question id is not declared in the active graph."""


class NoSuggestionPending(ValueError):
    """accept_switch without a matching open suggestion."""


def _ranked_groups(dist: ComplicationDistribution) -> list[ComplicationGroup]:
    """Groups by descending probability; exact ties break to lower ordinal."""
    order = sorted(range(NUM_GROUPS), key=lambda i: (-dist.probabilities[i], i))
    return [ComplicationGroup.from_ordinal(i) for i in order]


def select_start(
    dist: ComplicationDistribution, registry: GraphRegistry
) -> tuple[ComplicationGroup, TreatmentGraph, str]:
    """Start node for the highest-probability group with a binding.

    The argmax group wins; when it has no binding the next-highest bound
    group is used (and the fallthrough logged). No bound group at all is an
    error.
    """
    ranked = _ranked_groups(dist)
    for rank, group in enumerate(ranked):
        resolved = registry.resolve(group)
        if resolved is not None:
            if rank > 0:
                logger.warning(
                    "argmax group %s unbound; falling through to %s", ranked[0].value, group.value
                )
            graph, start = resolved
            return group, graph, start
    raise NoStartBound("no complication group in the distribution has a bound start node")


def uniform_distribution(produced_at: int = 0) -> ComplicationDistribution:
    return ComplicationDistribution(probabilities=np.full(NUM_GROUPS, 1.0 / NUM_GROUPS), produced_at=produced_at)


class SessionEngine:
    """All mutating and reading operations for one session."""

    def __init__(
        self,
        registry: GraphRegistry,
        session_id: Optional[str] = None,
        language: str = "en",
        policy: Optional[SwitchPolicy] = None,
    ):
        self.registry = registry
        self.state = SessionState(
            session_id=session_id or uuid.uuid4().hex,
            language=language,
            policy=policy or SwitchPolicy(),
        )

    # -- positioning ------------------------------------------------------

    def _graph(self) -> Optional[TreatmentGraph]:
        if self.state.active_graph_id is None:
            return None
        return self.registry.graph_by_id(self.state.active_graph_id)

    def _rebind(self, group: ComplicationGroup, graph: TreatmentGraph, start: str) -> None:
        self.state.active_group = group
        self.state.active_graph_id = graph.graph_id
        self.state.active_start = start
        self.state.positions = self._compute_positions()

    def _confirmed_since_rebind(self) -> set[str]:
        confirmed: set[str] = set()
        for entry in self.state.action_log:
            if entry.kind in ("switch", "override"):
                confirmed.clear()
            elif entry.kind == "confirm":
                confirmed.add(entry.node_id)
        return confirmed

    def _compute_positions(self) -> list[str]:
        """Resting nodes: expand from the start, passing confirmed Functions."""
        graph = self._graph()
        if graph is None or self.state.active_start is None:
            return []
        confirmed = self._confirmed_since_rebind()
        positions: list[str] = []
        expanded: set[str] = set()
        queue: deque[str] = deque([self.state.active_start])
        while queue:
            source = queue.popleft()
            if source in expanded:
                continue
            expanded.add(source)
            for resting in next_actions(graph, source, self.state.ctx).resting:
                if graph.node(resting).kind is NodeKind.FUNCTION and resting in confirmed:
                    queue.append(resting)
                elif resting not in positions:
                    positions.append(resting)
        return positions

    def actionable_functions(self) -> list[str]:
        graph = self._graph()
        if graph is None:
            return []
        return [p for p in self.state.positions if graph.node(p).kind is NodeKind.FUNCTION]

    # -- classifier input --------------------------------------------------

    def update_vitals(self, snapshot: dict[VitalKind, float], at: int) -> None:
        for kind, value in snapshot.items():
            self.state.ctx.set_vital(kind, value, at)
        self.state.positions = self._compute_positions()

    def ingest_distribution(self, dist: ComplicationDistribution) -> Optional[SwitchSuggestion]:
        """Fold one classifier update into the session.

        The first distribution positions the session (start-node selection,
        no suggestion). Afterwards a rival group must satisfy the switch
        policy's margin on consecutive updates to produce a suggestion; the
        engine never switches by itself.
        """
        state = self.state
        state.push_distribution(dist)

        if state.active_group is None:
            group, graph, start = select_start(dist, self.registry)
            self._rebind(group, graph, start)
            return None

        rival = _ranked_groups(dist)[0]
        active_probability = float(dist.probabilities[state.active_group.ordinal])
        rival_probability = float(dist.probabilities[rival.ordinal])
        margin_holds = (
            rival is not state.active_group
            and rival_probability - active_probability >= state.policy.margin
        )

        if not margin_holds:
            state.switch_counter_group = None
            state.switch_counter = 0
            return None

        if state.switch_counter_group is rival:
            state.switch_counter += 1
        else:
            state.switch_counter_group = rival
            state.switch_counter = 1

        if state.switch_counter >= state.policy.persistence:
            state.switch_counter_group = None
            state.switch_counter = 0
            state.open_suggestion = rival
            return SwitchSuggestion(
                group=rival, probability=rival_probability, active_probability=active_probability
            )
        return None

    # -- operator commands --------------------------------------------------

    def confirm_action(self, node_id: str, at: int, operator: str = "operator") -> None:
        graph = self._graph()
        offered = self.actionable_functions()
        if graph is None or node_id not in offered:
            raise ActionNotOffered(f"{node_id!r} is not actionable; offered: {offered}")
        self.state.action_log.append(
            ActionLogEntry(node_id=node_id, at=at, operator=operator, group=self._group_id(), kind="confirm")
        )
        self.state.positions = self._compute_positions()

    def answer_question(self, question_id: str, value: str, at: int, operator: str = "operator") -> None:
        graph = self._graph()
        if graph is None or question_id not in graph.questions:
            known = sorted(graph.questions) if graph else []
            raise UnknownQuestion(f"unknown question {question_id!r}; declared: {known}")
        self.state.ctx.set_answer(question_id, value)
        self.state.positions = self._compute_positions()

    def accept_switch(self, group: ComplicationGroup, at: int, operator: str = "operator") -> None:
        if self.state.open_suggestion is not group:
            raise NoSuggestionPending(f"no pending switch suggestion for {group.value}")
        resolved = self.registry.resolve(group)
        if resolved is None:
            raise NoStartBound(f"suggested group {group.value} has no bound start node")
        graph, start = resolved
        self.state.action_log.append(
            ActionLogEntry(node_id=start, at=at, operator=operator, group=group.value, kind="switch")
        )
        self._rebind(group, graph, start)
        self.state.open_suggestion = None
        self.state.switch_counter_group = None
        self.state.switch_counter = 0

    def override_path(self, group: ComplicationGroup, start_id: str, at: int, operator: str = "operator") -> None:
        target = None
        for graph in self.registry.graphs:
            if start_id in graph.start_nodes_for(group):
                target = graph
                break
        if target is None:
            raise NoStartBound(f"start {start_id!r} is not bound to group {group.value} in the registry")
        self.state.action_log.append(
            ActionLogEntry(node_id=start_id, at=at, operator=operator, group=group.value, kind="override")
        )
        self._rebind(group, target, start_id)
        self.state.open_suggestion = None
        self.state.switch_counter_group = None
        self.state.switch_counter = 0

    # -- read side -----------------------------------------------------------

    def _group_id(self) -> Optional[str]:
        return self.state.active_group.value if self.state.active_group else None

    def _linearized_path(self, graph: TreatmentGraph, seeds: list[str], depth: int) -> list[str]:
        """Breadth-first preview of upcoming Functions, ``depth`` many."""
        path: list[str] = []
        frontier = list(seeds)
        visited: set[str] = set()
        while frontier and len(path) < depth:
            next_frontier: list[str] = []
            for node_id in frontier:
                if node_id in visited:
                    continue
                visited.add(node_id)
                if graph.node(node_id).kind is NodeKind.FUNCTION and node_id not in path:
                    path.append(node_id)
                    if len(path) >= depth:
                        break
                next_frontier.extend(next_actions(graph, node_id, self.state.ctx).functions)
            frontier = next_frontier
        return path

    def current_recommendation(self, depth: int = 5) -> Recommendation:
        state = self.state
        latest = state.latest_distribution() or uniform_distribution()

        if state.active_group is not None:
            group = state.active_group
            graph: Optional[TreatmentGraph] = self._graph()
            seeds = list(state.positions)
        else:
            # unpositioned session: provisional view from the latest (or
            # uniform) distribution, state untouched
            group, graph, start = select_start(latest, self.registry)
            seeds = list(next_actions(graph, start, state.ctx).resting)

        actionable: list[str] = []
        pending = []
        completed = False
        active_path: list[str] = []
        if graph is not None:
            for position in seeds:
                node = graph.node(position)
                if node.kind is NodeKind.FUNCTION:
                    actionable.append(position)
                elif node.kind is NodeKind.END_EVENT:
                    completed = True
                else:
                    for item in next_actions(graph, position, state.ctx).pending:
                        if item not in pending:
                            pending.append(item)
            active_path = self._linearized_path(graph, seeds, depth)

        labels: dict[str, str] = {}
        if graph is not None:
            for node_id in set(active_path) | set(actionable):
                labels[node_id] = graph.node(node_id).label

        alternates = []
        for candidate in _ranked_groups(latest):
            if candidate is group:
                continue
            if len(alternates) >= 3:
                break
            resolved = self.registry.resolve(candidate)
            if resolved is None:
                alternates.append(
                    Alternate(group=candidate, probability=float(latest.probabilities[candidate.ordinal]), start=None, graph_id=None)
                )
                continue
            alt_graph, alt_start = resolved
            preview_seeds = list(next_actions(alt_graph, alt_start, state.ctx).resting)
            preview = self._linearized_path(alt_graph, preview_seeds, depth)
            for node_id in preview:
                labels.setdefault(node_id, alt_graph.node(node_id).label)
            alternates.append(
                Alternate(
                    group=candidate,
                    probability=float(latest.probabilities[candidate.ordinal]),
                    start=alt_start,
                    graph_id=alt_graph.graph_id,
                    preview=preview,
                )
            )

        return Recommendation(
            active_group=group,
            graph_id=graph.graph_id if graph else None,
            active_path=active_path,
            actionable=actionable,
            alternates=alternates,
            pending=pending,
            max_probability=latest.max_probability(),
            entropy=latest.entropy(),
            completed=completed,
            labels=labels,
        )

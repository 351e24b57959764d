"""Session state, the switch policy, and the operator-facing recommendation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from rescueaid.groups import ComplicationGroup
from rescueaid.recognition.network import ComplicationDistribution
from rescueaid.treatment.model import DataContext
from rescueaid.treatment.traversal import PendingItem

SUPPORTED_LANGUAGES = ("en", "de")

#: How many past distributions a session keeps (bounded for wearable memory).
DEFAULT_HISTORY_LIMIT = 32


@dataclass(frozen=True)
class SwitchPolicy:
    """Hysteresis for path-switch suggestions.

    A rival group must beat the active one by ``margin`` on ``persistence``
    consecutive classifier updates before a suggestion is emitted. The
    engine only ever suggests; switching is the operator's call.
    """

    margin: float = 0.10
    persistence: int = 3

    def __post_init__(self) -> None:
        if not 0.0 < self.margin < 1.0:
            raise ValueError("switch margin must lie in (0, 1)")
        if self.persistence < 1:
            raise ValueError("switch persistence must be at least 1")


@dataclass(frozen=True)
class SwitchSuggestion:
    group: ComplicationGroup
    probability: float
    active_probability: float

    def to_dict(self) -> dict:
        return {
            "group": self.group.value,
            "probability": self.probability,
            "active_probability": self.active_probability,
        }


@dataclass
class ActionLogEntry:
    node_id: str
    at: int
    operator: str
    group: Optional[str]  # group id active when the entry was logged
    kind: str = "confirm"  # "confirm" | "switch" | "override"

    def to_dict(self) -> dict:
        return {
            "node_id": self.node_id,
            "at": self.at,
            "operator": self.operator,
            "group": self.group,
            "kind": self.kind,
        }


@dataclass
class Alternate:
    group: ComplicationGroup
    probability: float
    start: Optional[str]
    graph_id: Optional[str]
    preview: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "group": self.group.value,
            "probability": self.probability,
            "start": self.start,
            "graph_id": self.graph_id,
            "preview": self.preview,
        }


@dataclass
class Recommendation:
    """What the operator sees: active path, alternates, questions, severity."""

    active_group: ComplicationGroup
    graph_id: Optional[str]
    active_path: list[str]
    actionable: list[str]
    alternates: list[Alternate]
    pending: list[PendingItem]
    max_probability: float
    entropy: float
    completed: bool
    labels: dict[str, str] = field(default_factory=dict)  # node id -> display label

    def to_dict(self) -> dict:
        return {
            "active_group": self.active_group.value,
            "graph_id": self.graph_id,
            "active_path": self.active_path,
            "actionable": self.actionable,
            "alternates": [a.to_dict() for a in self.alternates],
            "pending": [p.to_dict() for p in self.pending],
            # max-probability and entropy stand in for an undefined severity
            # scale; they are proxies, not clinical semantics
            "severity_proxies": {"max_probability": self.max_probability, "entropy": self.entropy},
            "completed": self.completed,
            "labels": dict(sorted(self.labels.items())),
        }


@dataclass
class SessionState:
    """Everything a live session knows; replayable from its event log."""

    session_id: str
    language: str = "en"
    policy: SwitchPolicy = field(default_factory=SwitchPolicy)
    history_limit: int = DEFAULT_HISTORY_LIMIT

    active_group: Optional[ComplicationGroup] = None
    active_graph_id: Optional[str] = None
    active_start: Optional[str] = None
    positions: list[str] = field(default_factory=list)
    action_log: list[ActionLogEntry] = field(default_factory=list)
    history: list[ComplicationDistribution] = field(default_factory=list)
    ctx: DataContext = field(default_factory=DataContext)
    switch_counter_group: Optional[ComplicationGroup] = None
    switch_counter: int = 0
    open_suggestion: Optional[ComplicationGroup] = None
    closed: bool = False

    def __post_init__(self) -> None:
        if self.language not in SUPPORTED_LANGUAGES:
            raise ValueError(f"unsupported language {self.language!r} (supported: {SUPPORTED_LANGUAGES})")

    def latest_distribution(self) -> Optional[ComplicationDistribution]:
        return self.history[-1] if self.history else None

    def push_distribution(self, dist: ComplicationDistribution) -> None:
        self.history.append(dist)
        if len(self.history) > self.history_limit:
            del self.history[: len(self.history) - self.history_limit]

    def to_dict(self) -> dict:
        """Canonical snapshot used for replay-equality checks."""
        return {
            "session_id": self.session_id,
            "language": self.language,
            "policy": {"margin": self.policy.margin, "persistence": self.policy.persistence},
            "active_group": self.active_group.value if self.active_group else None,
            "active_graph_id": self.active_graph_id,
            "active_start": self.active_start,
            "positions": list(self.positions),
            "action_log": [entry.to_dict() for entry in self.action_log],
            "history": [
                {"probabilities": dist.to_list(), "produced_at": dist.produced_at} for dist in self.history
            ],
            "ctx": self.ctx.to_dict(),
            "switch_counter_group": self.switch_counter_group.value if self.switch_counter_group else None,
            "switch_counter": self.switch_counter,
            "open_suggestion": self.open_suggestion.value if self.open_suggestion else None,
            "closed": self.closed,
        }

    def snapshot_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

"""Recommendation engine: couples the classifier with treatment graphs."""

from rescueaid.engine.session import (
    ActionNotOffered,
    NoStartBound,
    NoSuggestionPending,
    SessionEngine,
    UnknownQuestion,
    select_start,
)
from rescueaid.engine.state import (
    ActionLogEntry,
    Recommendation,
    SessionState,
    SwitchPolicy,
    SwitchSuggestion,
)

__all__ = [
    "ActionLogEntry",
    "ActionNotOffered",
    "NoStartBound",
    "NoSuggestionPending",
    "Recommendation",
    "SessionEngine",
    "SessionState",
    "SwitchPolicy",
    "SwitchSuggestion",
    "UnknownQuestion",
    "select_start",
]

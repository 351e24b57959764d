"""Append-only session event log and deterministic replay.

The log is newline-delimited JSON, one record per line:
``{"seq", "session_id", "kind", "at", "payload"}``. Sequence numbers are
gap-free per session. Input-type records (creation, classifier updates,
operator commands) fully determine the session; derived records
(recommendation changes, suggestions, asked questions) are regenerated by
replay rather than applied.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from rescueaid.groups import ComplicationGroup, VitalKind
from rescueaid.recognition.network import ComplicationDistribution
from rescueaid.treatment.registry import GraphRegistry
from rescueaid.engine.session import SessionEngine
from rescueaid.engine.state import SessionState, SwitchPolicy

# wire event kinds (monotone per session, exposed to subscribers)
DISTRIBUTION_UPDATED = "DistributionUpdated"
RECOMMENDATION_CHANGED = "RecommendationChanged"
SWITCH_SUGGESTED = "SwitchSuggested"
ACTION_CONFIRMED = "ActionConfirmed"
QUESTION_ASKED = "QuestionAsked"
QUESTION_ANSWERED = "QuestionAnswered"
PATH_OVERRIDDEN = "PathOverridden"
SESSION_CLOSED = "SessionClosed"

#: log-only record written once at the top of each session log
SESSION_CREATED = "SessionCreated"

EVENT_KINDS = (
    DISTRIBUTION_UPDATED,
    RECOMMENDATION_CHANGED,
    SWITCH_SUGGESTED,
    ACTION_CONFIRMED,
    QUESTION_ASKED,
    QUESTION_ANSWERED,
    PATH_OVERRIDDEN,
    SESSION_CLOSED,
)

#: kinds a replay applies; everything else is derived output
INPUT_KINDS = (
    SESSION_CREATED,
    DISTRIBUTION_UPDATED,
    ACTION_CONFIRMED,
    QUESTION_ANSWERED,
    PATH_OVERRIDDEN,
    SESSION_CLOSED,
)


@dataclass(frozen=True)
class EventRecord:
    seq: int
    session_id: str
    kind: str
    at: int
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {"seq": self.seq, "session_id": self.session_id, "kind": self.kind, "at": self.at, "payload": self.payload},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, line: str) -> "EventRecord":
        raw = json.loads(line)
        return cls(
            seq=int(raw["seq"]),
            session_id=str(raw["session_id"]),
            kind=str(raw["kind"]),
            at=int(raw["at"]),
            payload=dict(raw.get("payload", {})),
        )


def write_event_log(records: Iterable[EventRecord], path: Union[str, Path]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(record.to_json() + "\n")


def read_event_log(path: Union[str, Path]) -> list[EventRecord]:
    records = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(EventRecord.from_json(line))
    return records


def replay_session(records: Iterable[EventRecord], registry: GraphRegistry) -> SessionState:
    """Re-run the input events through a fresh engine; returns final state.

    The first record must be the SessionCreated header. Derived events in
    the stream are skipped: the engine regenerates them, which is exactly
    what makes recorded suggestions trustworthy.
    """
    records = list(records)
    if not records or records[0].kind != SESSION_CREATED:
        raise ValueError("event log must start with a SessionCreated record")
    created = records[0]
    policy_raw = created.payload.get("policy", {})
    engine = SessionEngine(
        registry,
        session_id=created.session_id,
        language=created.payload.get("language", "en"),
        policy=SwitchPolicy(
            margin=float(policy_raw.get("margin", 0.10)),
            persistence=int(policy_raw.get("persistence", 3)),
        ),
    )

    for record in records[1:]:
        payload = record.payload
        if record.kind == DISTRIBUTION_UPDATED:
            vitals = {
                VitalKind(kind_id): float(value)
                for kind_id, value in payload.get("vitals", {}).items()
            }
            if vitals:
                engine.update_vitals(vitals, at=int(payload.get("snapshot_at", record.at)))
            engine.ingest_distribution(
                ComplicationDistribution(
                    probabilities=np.array(payload["probabilities"], dtype=np.float64),
                    produced_at=int(payload.get("produced_at", record.at)),
                )
            )
        elif record.kind == ACTION_CONFIRMED:
            engine.confirm_action(payload["node_id"], at=record.at, operator=payload.get("operator", "operator"))
        elif record.kind == QUESTION_ANSWERED:
            engine.answer_question(
                payload["question_id"], payload["value"], at=record.at, operator=payload.get("operator", "operator")
            )
        elif record.kind == PATH_OVERRIDDEN:
            group = ComplicationGroup.from_id(payload["group"])
            if payload.get("cause") == "switch":
                engine.accept_switch(group, at=record.at, operator=payload.get("operator", "operator"))
            else:
                engine.override_path(
                    group, payload["start"], at=record.at, operator=payload.get("operator", "operator")
                )
        elif record.kind == SESSION_CLOSED:
            engine.state.closed = True
    return engine.state

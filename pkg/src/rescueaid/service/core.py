"""The in-process service core: session runtimes and recognition loops.

One background recognition loop per session drains the vitals queue,
aggregates a windowed snapshot on the sample (simulation) clock, runs the
classifier, folds the distribution into the engine, and emits events. All
engine access for a session funnels through that session's lock, so
operator commands and classifier updates serialize in arrival order.

The HTTP layer in :mod:`rescueaid.service.http` is a thin adapter over this
class; everything here is callable in-process, which is how the scripted
demo and the acceptance suite run headless.
"""

from __future__ import annotations

import json
import logging
import queue
import threading
import time
import uuid
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional

from rescueaid.engine.eventlog import (
    ACTION_CONFIRMED,
    DISTRIBUTION_UPDATED,
    PATH_OVERRIDDEN,
    QUESTION_ANSWERED,
    QUESTION_ASKED,
    RECOMMENDATION_CHANGED,
    SESSION_CLOSED,
    SESSION_CREATED,
    SWITCH_SUGGESTED,
    EventRecord,
)
from rescueaid.engine.session import (
    ActionNotOffered,
    NoStartBound,
    NoSuggestionPending,
    SessionEngine,
    UnknownQuestion,
)
from rescueaid.engine.state import SUPPORTED_LANGUAGES, SwitchPolicy
from rescueaid.groups import ComplicationGroup
from rescueaid.recognition.pipeline import ModelBundle
from rescueaid.service.config import ServiceConfig
from rescueaid.service.events import SessionEventStream
from rescueaid.treatment.registry import GraphRegistry
from rescueaid.vitals.framing import decode_frames
from rescueaid.vitals.samples import MissionDescription, VitalSample
from rescueaid.vitals.windows import window_snapshot

logger = logging.getLogger(__name__)


class ServiceError(Exception):
    """Structured service failure; ``status`` maps onto HTTP."""

    status = 400

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message

    def to_dict(self) -> dict:
        return {"error": {"code": self.code, "message": self.message}}


class UnknownSession(ServiceError):
    status = 404

    def __init__(self, session_id: str):
        super().__init__("unknown-session", f"no session {session_id!r}")


class CommandRejected(ServiceError):
    status = 409


class BadRequest(ServiceError):
    status = 400


@dataclass
class SessionRuntime:
    engine: SessionEngine
    stream: SessionEventStream
    lock: threading.RLock = field(default_factory=threading.RLock)
    samples: "queue.Queue[tuple[VitalSample, float]]" = field(default_factory=queue.Queue)
    buffer: deque = field(default_factory=deque)
    sim_now: int = 0
    mission: Optional[MissionDescription] = None
    last_recommendation: str = ""
    asked_questions: set = field(default_factory=set)
    latencies_ms: list = field(default_factory=list)
    stop: threading.Event = field(default_factory=threading.Event)
    thread: Optional[threading.Thread] = None
    log_file: Optional[object] = None
    closed: bool = False


class ServiceCore:
    def __init__(
        self,
        config: Optional[ServiceConfig] = None,
        registry: Optional[GraphRegistry] = None,
        bundle: Optional[ModelBundle] = None,
    ):
        self.config = config or ServiceConfig()
        self.registry = registry or GraphRegistry.from_directory(self.config.graphs_dir)
        if bundle is None:
            if self.config.model_path is None:
                raise ValueError("a model bundle is required: set model_path or pass bundle=")
            bundle = ModelBundle.load(self.config.model_path)
        self.bundle = bundle
        self.policy = SwitchPolicy(
            margin=self.config.switch_margin, persistence=self.config.switch_persistence
        )
        self._sessions: dict[str, SessionRuntime] = {}
        self._registry_lock = threading.Lock()

    # -- lifecycle ---------------------------------------------------------

    def create_session(self, language: Optional[str] = None) -> tuple[str, dict]:
        language = language or self.config.language_default
        if language not in SUPPORTED_LANGUAGES:
            raise BadRequest("unsupported-language", f"language {language!r} not in {SUPPORTED_LANGUAGES}")
        session_id = uuid.uuid4().hex[:12]
        engine = SessionEngine(self.registry, session_id=session_id, language=language, policy=self.policy)
        runtime = SessionRuntime(engine=engine, stream=SessionEventStream(session_id))

        if self.config.event_log_dir is not None:
            log_dir = Path(self.config.event_log_dir)
            log_dir.mkdir(parents=True, exist_ok=True)
            runtime.log_file = (log_dir / f"{session_id}.ndjson").open("w", encoding="utf-8")

        with self._registry_lock:
            self._sessions[session_id] = runtime

        with runtime.lock:
            self._emit(
                runtime,
                SESSION_CREATED,
                at=self._wall_ms(),
                payload={
                    "language": language,
                    "policy": {"margin": self.policy.margin, "persistence": self.policy.persistence},
                },
            )
            recommendation = self._emit_recommendation_updates(runtime, force=True)

        runtime.thread = threading.Thread(
            target=self._recognition_loop, args=(runtime,), name=f"recognition-{session_id}", daemon=True
        )
        runtime.thread.start()
        logger.info("session %s created (language=%s)", session_id, language)
        return session_id, recommendation

    def close_session(self, session_id: str) -> None:
        runtime = self._runtime(session_id)
        with runtime.lock:
            if runtime.closed:
                return
            runtime.closed = True
            runtime.engine.state.closed = True
            self._emit(runtime, SESSION_CLOSED, at=self._wall_ms(), payload={})
            if runtime.log_file is not None:
                runtime.log_file.close()
                runtime.log_file = None
        runtime.stop.set()
        if runtime.thread is not None and runtime.thread is not threading.current_thread():
            runtime.thread.join(timeout=2.0)

    def shutdown(self) -> None:
        for session_id in list(self._sessions):
            try:
                self.close_session(session_id)
            except ServiceError:
                pass

    def session_ids(self) -> list[str]:
        with self._registry_lock:
            return list(self._sessions)

    # -- ingest --------------------------------------------------------------

    def ingest_frames(self, data: bytes) -> dict:
        """Decode a frame batch and route samples to every open session."""
        samples, errors = decode_frames(data)
        arrival = time.monotonic()
        routed = 0
        with self._registry_lock:
            runtimes = [r for r in self._sessions.values() if not r.closed]
        for sample in samples:
            for runtime in runtimes:
                runtime.samples.put((sample, arrival))
            routed += 1
        return {
            "accepted": routed,
            "sessions": len(runtimes),
            "errors": [str(e) for e in errors],
        }

    def ingest_mission(self, text: str, dispatch_code: str = "", at: Optional[int] = None) -> None:
        mission = MissionDescription(dispatch_code=dispatch_code, text=text, received_at=at or self._wall_ms())
        with self._registry_lock:
            runtimes = [r for r in self._sessions.values() if not r.closed]
        for runtime in runtimes:
            with runtime.lock:
                runtime.mission = mission

    # -- commands --------------------------------------------------------------

    def confirm_action(self, session_id: str, node_id: str) -> dict:
        runtime = self._runtime(session_id)
        at = self._wall_ms()
        with runtime.lock:
            self._guard_open(runtime)
            try:
                runtime.engine.confirm_action(node_id, at=at)
            except (ActionNotOffered, KeyError) as exc:
                raise CommandRejected("action-not-offered", str(exc)) from exc
            self._emit(runtime, ACTION_CONFIRMED, at=at, payload={"node_id": node_id, "operator": "operator"})
            return self._emit_recommendation_updates(runtime)

    def answer_question(self, session_id: str, question_id: str, value: str) -> dict:
        runtime = self._runtime(session_id)
        at = self._wall_ms()
        with runtime.lock:
            self._guard_open(runtime)
            try:
                runtime.engine.answer_question(question_id, value, at=at)
            except UnknownQuestion as exc:
                raise CommandRejected("unknown-question", str(exc)) from exc
            self._emit(
                runtime,
                QUESTION_ANSWERED,
                at=at,
                payload={"question_id": question_id, "value": value, "operator": "operator"},
            )
            return self._emit_recommendation_updates(runtime)

    def accept_switch(self, session_id: str, group_id: str) -> dict:
        runtime = self._runtime(session_id)
        at = self._wall_ms()
        group = self._parse_group(group_id)
        with runtime.lock:
            self._guard_open(runtime)
            try:
                runtime.engine.accept_switch(group, at=at)
            except (NoSuggestionPending, NoStartBound) as exc:
                raise CommandRejected("switch-rejected", str(exc)) from exc
            self._emit(
                runtime,
                PATH_OVERRIDDEN,
                at=at,
                payload={
                    "group": group.value,
                    "start": runtime.engine.state.active_start,
                    "cause": "switch",
                    "operator": "operator",
                },
            )
            return self._emit_recommendation_updates(runtime)

    def override_path(self, session_id: str, group_id: str, start_id: str) -> dict:
        runtime = self._runtime(session_id)
        at = self._wall_ms()
        group = self._parse_group(group_id)
        with runtime.lock:
            self._guard_open(runtime)
            try:
                runtime.engine.override_path(group, start_id, at=at)
            except NoStartBound as exc:
                raise CommandRejected("override-rejected", str(exc)) from exc
            self._emit(
                runtime,
                PATH_OVERRIDDEN,
                at=at,
                payload={"group": group.value, "start": start_id, "cause": "override", "operator": "operator"},
            )
            return self._emit_recommendation_updates(runtime)

    # -- reads --------------------------------------------------------------------

    def recommendation(self, session_id: str) -> dict:
        runtime = self._runtime(session_id)
        with runtime.lock:
            return runtime.engine.current_recommendation(self.config.recommendation_depth).to_dict()

    def events_snapshot(self, session_id: str, from_seq: int = 0) -> list[EventRecord]:
        return self._runtime(session_id).stream.snapshot(from_seq)

    def subscribe_events(
        self, session_id: str, from_seq: int = 0, stop: Optional[threading.Event] = None
    ) -> Iterator[EventRecord]:
        return self._runtime(session_id).stream.subscribe(from_seq, stop=stop)

    def latencies_ms(self, session_id: str) -> list[float]:
        runtime = self._runtime(session_id)
        with runtime.lock:
            return list(runtime.latencies_ms)

    def session_language(self, session_id: str) -> str:
        return self._runtime(session_id).engine.state.language

    # -- internals -------------------------------------------------------------------

    def _wall_ms(self) -> int:
        return int(time.time() * 1000)

    def _parse_group(self, group_id: str) -> ComplicationGroup:
        try:
            return ComplicationGroup.from_id(group_id)
        except ValueError as exc:
            raise BadRequest("unknown-group", str(exc)) from exc

    def _runtime(self, session_id: str) -> SessionRuntime:
        with self._registry_lock:
            runtime = self._sessions.get(session_id)
        if runtime is None:
            raise UnknownSession(session_id)
        return runtime

    def _guard_open(self, runtime: SessionRuntime) -> None:
        if runtime.closed:
            raise CommandRejected("session-closed", f"session {runtime.stream.session_id} is closed")

    def _emit(self, runtime: SessionRuntime, kind: str, at: int, payload: dict) -> EventRecord:
        record = runtime.stream.append(kind, at, payload)
        if runtime.log_file is not None:
            runtime.log_file.write(record.to_json() + "\n")
            runtime.log_file.flush()
        return record

    def _emit_recommendation_updates(self, runtime: SessionRuntime, force: bool = False) -> dict:
        """Emit RecommendationChanged / QuestionAsked edges; returns the dict."""
        recommendation = runtime.engine.current_recommendation(self.config.recommendation_depth).to_dict()
        encoded = json.dumps(recommendation, sort_keys=True)
        if force or encoded != runtime.last_recommendation:
            runtime.last_recommendation = encoded
            self._emit(
                runtime,
                RECOMMENDATION_CHANGED,
                at=self._wall_ms(),
                payload={"recommendation": recommendation},
            )
        graph = None
        if runtime.engine.state.active_graph_id is not None:
            graph = self.registry.graph_by_id(runtime.engine.state.active_graph_id)
        for item in recommendation["pending"]:
            if item["kind"] != "question":
                continue
            key = (runtime.engine.state.active_graph_id, item["id"])
            if key not in runtime.asked_questions:
                runtime.asked_questions.add(key)
                text = graph.questions.get(item["id"], "") if graph else ""
                self._emit(
                    runtime,
                    QUESTION_ASKED,
                    at=self._wall_ms(),
                    payload={"question_id": item["id"], "text": text},
                )
        return recommendation

    def _recognition_loop(self, runtime: SessionRuntime) -> None:
        window_ms = self.config.window_ms
        while not runtime.stop.is_set():
            try:
                first = runtime.samples.get(timeout=0.1)
            except queue.Empty:
                continue
            batch = [first]
            while True:
                try:
                    batch.append(runtime.samples.get_nowait())
                except queue.Empty:
                    break
            earliest_arrival = min(arrival for _, arrival in batch)

            with runtime.lock:
                if runtime.closed:
                    break
                for sample, _ in batch:
                    runtime.buffer.append(sample)
                    runtime.sim_now = max(runtime.sim_now, sample.at)
                cutoff = runtime.sim_now - 2 * window_ms
                while runtime.buffer and runtime.buffer[0].at < cutoff:
                    runtime.buffer.popleft()

                snapshot = window_snapshot(runtime.buffer, window_ms, runtime.sim_now)
                if not snapshot:
                    continue
                runtime.engine.update_vitals(snapshot, at=runtime.sim_now)
                texts = {"mission": runtime.mission.text} if runtime.mission else {}
                distribution = self.bundle.classify_snapshot(snapshot, texts, produced_at=runtime.sim_now)
                suggestion = runtime.engine.ingest_distribution(distribution)

                self._emit(
                    runtime,
                    DISTRIBUTION_UPDATED,
                    at=runtime.sim_now,
                    payload={
                        "probabilities": distribution.to_list(),
                        "produced_at": runtime.sim_now,
                        "snapshot_at": runtime.sim_now,
                        "vitals": {kind.value: value for kind, value in sorted(snapshot.items(), key=lambda kv: kv[0].value)},
                    },
                )
                if suggestion is not None:
                    self._emit(
                        runtime,
                        SWITCH_SUGGESTED,
                        at=runtime.sim_now,
                        payload=dict(
                            suggestion.to_dict(),
                            active_group=runtime.engine.state.active_group.value,
                        ),
                    )
                self._emit_recommendation_updates(runtime)
                runtime.latencies_ms.append((time.monotonic() - earliest_arrival) * 1000.0)

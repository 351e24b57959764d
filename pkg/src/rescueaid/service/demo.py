"""Scripted end-to-end demo: simulator, service, and operator in one process.

The demo scenario opens with a respiratory vitals pattern, shifts to a
cardiovascular pattern at the 60 s mark of simulation time, and runs 100 s
total. The scripted operator confirms the first offered action, answers the
one pending question, and accepts the switch suggestion when it arrives.

Replay is lock-step by default: after each burst of frames the runner waits
for the recognition tick it caused, which makes the emitted event sequence
deterministic under the scenario seed regardless of host speed.
"""

from __future__ import annotations

import math
import time
from pathlib import Path
from typing import Callable, Optional, Union

from rescueaid.engine.eventlog import DISTRIBUTION_UPDATED, SWITCH_SUGGESTED
from rescueaid.recognition.pipeline import FittedPipeline, ModelBundle, features_from_table, fit_pipeline
from rescueaid.recognition.network import init_model
from rescueaid.recognition.synthetic import DEFAULT_PROFILES, generate_synthetic_cases
from rescueaid.recognition.training import TrainingConfig, train
from rescueaid.groups import ComplicationGroup
from rescueaid.service.core import ServiceCore
from rescueaid.service.config import ServiceConfig
from rescueaid.vitals.framing import encode_frame
from rescueaid.vitals.samples import MissionDescription, VitalSample
from rescueaid.vitals.scenario import Scenario, ScenarioPhase, make_pattern_scenario

DEMO_SHIFT_MS = 60_000
DEMO_TOTAL_MS = 100_000
DEMO_BURST_MS = 4_000


def profile_means(group: ComplicationGroup) -> dict:
    profile = next(p for p in DEFAULT_PROFILES if p.group is group)
    return {kind: mean for kind, (mean, _sd) in profile.vitals.items()}


def make_switch_scenario(seed: int = 7, shift_ms: int = DEMO_SHIFT_MS, total_ms: int = DEMO_TOTAL_MS, burst_ms: int = DEMO_BURST_MS) -> Scenario:
    """Respiratory pattern, then a cardiovascular pattern from ``shift_ms``."""
    return make_pattern_scenario(
        "respiratory onset shifting to cardiovascular",
        [
            ScenarioPhase(shift_ms, profile_means(ComplicationGroup.RESPIRATORY), mission="caller reports shortness of breath"),
            ScenarioPhase(total_ms, profile_means(ComplicationGroup.CARDIOVASCULAR)),
        ],
        burst_ms=burst_ms,
        seed=seed,
    )


def train_demo_bundle(seed: int = 2024, per_group: int = 150, epochs: int = 30) -> ModelBundle:
    """Train a desk-scale bundle on synthetic cases; deterministic under seed."""
    table = generate_synthetic_cases(DEFAULT_PROFILES, per_group * len(DEFAULT_PROFILES), seed=seed)
    pipeline: FittedPipeline = fit_pipeline(table, schema_id=f"demo-{seed}")
    x, y = features_from_table(table, pipeline)
    config = TrainingConfig(hidden_layout=[64, 64], learning_rate=0.1, epochs=epochs, batch_size=32, seed=seed)
    model = init_model(x.shape[1], config.hidden_layout, seed=config.seed, schema_id=pipeline.schema.schema_id)
    trained, _ = train(model, x, y, config)
    return ModelBundle(model=trained, schema=pipeline.schema, scheme=pipeline.scheme, tfidf=pipeline.tfidf)


def _burst_groups(scenario: Scenario):
    """Consecutive timeline entries sharing an offset, in order."""
    bursts: list[tuple[int, list]] = []
    for entry in scenario.timeline:
        if bursts and bursts[-1][0] == entry.offset_ms:
            bursts[-1][1].append(entry.payload)
        else:
            bursts.append((entry.offset_ms, [entry.payload]))
    return bursts


def run_demo(
    core: Optional[ServiceCore] = None,
    scenario: Optional[Scenario] = None,
    bundle: Optional[ModelBundle] = None,
    speed: float = math.inf,
    tick_timeout: float = 5.0,
    printer: Optional[Callable[[str], None]] = None,
    event_log_dir: Optional[Union[str, Path]] = None,
) -> dict:
    """Run the scripted demo; returns the session's full event record list.

    ``speed`` paces bursts by wall clock; the default is lock-step (no
    pacing beyond waiting for each tick). The returned dict carries the
    session id, the event records, and the operator steps taken.
    """
    say = printer or (lambda line: None)
    scenario = scenario or make_switch_scenario()
    if core is None:
        bundle = bundle or train_demo_bundle()
        config = ServiceConfig(event_log_dir=Path(event_log_dir) if event_log_dir else None)
        core = ServiceCore(config=config, bundle=bundle)

    session_id, recommendation = core.create_session()
    say(f"session {session_id} created; provisional group {recommendation['active_group']}")

    steps: list[str] = []
    confirmed_first = answered = accepted = False
    seen_seq = 0
    start_wall = time.monotonic()

    try:
        for offset_ms, payloads in _burst_groups(scenario):
            if math.isfinite(speed):
                target = offset_ms / 1000.0 / speed
                delay = target - (time.monotonic() - start_wall)
                if delay > 0:
                    time.sleep(delay)

            frames = b""
            tick_expected = False
            for payload in payloads:
                if isinstance(payload, VitalSample):
                    frames += encode_frame(payload)
                    tick_expected = True
                elif isinstance(payload, MissionDescription):
                    core.ingest_mission(payload.text, payload.dispatch_code, at=payload.received_at)
            if frames:
                core.ingest_frames(frames)
            if tick_expected:
                _wait_for_tick(core, session_id, offset_ms, tick_timeout)

            new_records = core.events_snapshot(session_id, from_seq=seen_seq)
            seen_seq += len(new_records)

            if not accepted:
                for record in new_records:
                    if record.kind == SWITCH_SUGGESTED:
                        group = record.payload["group"]
                        core.accept_switch(session_id, group)
                        accepted = True
                        steps.append(f"accepted switch to {group}")
                        say(f"[{offset_ms/1000:6.1f}s] switch to {group} suggested and accepted")
                        break

            recommendation = core.recommendation(session_id)
            if not confirmed_first and recommendation["actionable"]:
                node = recommendation["actionable"][0]
                core.confirm_action(session_id, node)
                confirmed_first = True
                steps.append(f"confirmed {node}")
                say(f"[{offset_ms/1000:6.1f}s] confirmed first action {node}")
                recommendation = core.recommendation(session_id)
            if confirmed_first and not answered:
                questions = [p["id"] for p in recommendation["pending"] if p["kind"] == "question"]
                if questions:
                    core.answer_question(session_id, questions[0], "yes")
                    answered = True
                    steps.append(f"answered {questions[0]}=yes")
                    say(f"[{offset_ms/1000:6.1f}s] answered {questions[0]}: yes")
    finally:
        core.close_session(session_id)

    records = core.events_snapshot(session_id, from_seq=0)
    say(f"demo finished: {len(records)} events, operator steps: {', '.join(steps)}")
    return {
        "session_id": session_id,
        "records": records,
        "steps": steps,
        "latencies_ms": core.latencies_ms(session_id),
    }


def _wait_for_tick(core: ServiceCore, session_id: str, offset_ms: int, timeout: float) -> None:
    """Block until the recognition loop has processed up to ``offset_ms``."""
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        records = core.events_snapshot(session_id, from_seq=0)
        ticks = [r for r in records if r.kind == DISTRIBUTION_UPDATED]
        if ticks and ticks[-1].payload["produced_at"] >= offset_ms:
            return
        time.sleep(0.002)
    raise TimeoutError(f"recognition tick for offset {offset_ms} ms did not arrive within {timeout}s")

import random

import numpy as np
import pytest

from rescueaid.assets import graphs_dir
from rescueaid.engine import SessionEngine, SwitchPolicy
from rescueaid.engine.eventlog import (
    ACTION_CONFIRMED,
    DISTRIBUTION_UPDATED,
    PATH_OVERRIDDEN,
    QUESTION_ANSWERED,
    SESSION_CLOSED,
    SESSION_CREATED,
    EventRecord,
    read_event_log,
    replay_session,
    write_event_log,
)
from rescueaid.groups import NUM_GROUPS, ComplicationGroup, VitalKind
from rescueaid.recognition.network import ComplicationDistribution
from rescueaid.treatment import GraphRegistry


@pytest.fixture(scope="module")
def registry():
    return GraphRegistry.from_directory(graphs_dir())


def record_scripted_session(registry, seed):
    """Drive a live engine with random-ish inputs, recording input events.

    Returns (records, final_state_json). This is the recorder the service
    mirrors; the test replays the records and compares snapshots.
    """
    rng = random.Random(seed)
    session_id = f"scripted-{seed}"
    policy = SwitchPolicy(margin=0.10, persistence=3)
    engine = SessionEngine(registry, session_id=session_id, policy=policy)

    records = [
        EventRecord(
            seq=0,
            session_id=session_id,
            kind=SESSION_CREATED,
            at=0,
            payload={"language": "en", "policy": {"margin": policy.margin, "persistence": policy.persistence}},
        )
    ]
    seq = 1
    now = 0

    def emit(kind, payload):
        nonlocal seq
        records.append(EventRecord(seq=seq, session_id=session_id, kind=kind, at=now, payload=payload))
        seq += 1

    groups = [ComplicationGroup.RESPIRATORY, ComplicationGroup.CARDIOVASCULAR, ComplicationGroup.INFECTION]
    for step in range(rng.randint(8, 20)):
        now += rng.randint(500, 3000)
        roll = rng.random()
        if roll < 0.55:
            # classifier tick: vitals snapshot + distribution
            lead = rng.choice(groups)
            probs = np.full(NUM_GROUPS, 0.02)
            probs[lead.ordinal] = 1.0 - 0.02 * (NUM_GROUPS - 1)
            vitals = {
                VitalKind.SPO2: round(rng.uniform(80, 99), 1),
                VitalKind.HEART_RATE: round(rng.uniform(60, 130), 1),
                VitalKind.SYS_BP: round(rng.uniform(90, 180), 1),
            }
            engine.update_vitals(vitals, at=now)
            dist = ComplicationDistribution(probabilities=probs, produced_at=now)
            engine.ingest_distribution(dist)
            emit(
                DISTRIBUTION_UPDATED,
                {
                    "probabilities": dist.to_list(),
                    "produced_at": now,
                    "snapshot_at": now,
                    "vitals": {kind.value: value for kind, value in vitals.items()},
                },
            )
        elif roll < 0.75:
            offered = engine.actionable_functions()
            if offered:
                node = rng.choice(offered)
                engine.confirm_action(node, at=now)
                emit(ACTION_CONFIRMED, {"node_id": node, "operator": "operator"})
        elif roll < 0.9:
            graph = engine.registry.graph_by_id(engine.state.active_graph_id) if engine.state.active_graph_id else None
            if graph and graph.questions:
                question = sorted(graph.questions)[0]
                value = rng.choice(["yes", "no"])
                engine.answer_question(question, value, at=now)
                emit(QUESTION_ANSWERED, {"question_id": question, "value": value, "operator": "operator"})
        else:
            if engine.state.open_suggestion is not None:
                group = engine.state.open_suggestion
                engine.accept_switch(group, at=now)
                start = engine.state.active_start
                emit(PATH_OVERRIDDEN, {"group": group.value, "start": start, "cause": "switch", "operator": "operator"})
            elif engine.state.active_group is not None:
                engine.override_path(ComplicationGroup.CARDIOVASCULAR, "start_acs", at=now)
                emit(
                    PATH_OVERRIDDEN,
                    {"group": "cardiovascular", "start": "start_acs", "cause": "override", "operator": "operator"},
                )
    now += 100
    engine.state.closed = True
    emit(SESSION_CLOSED, {})
    return records, engine.state.snapshot_json()


class TestReplay:
    def test_twenty_scripted_sessions_replay_bit_identical(self, registry):
        for seed in range(20):
            records, live_snapshot = record_scripted_session(registry, seed)
            replayed = replay_session(records, registry)
            assert replayed.snapshot_json() == live_snapshot, f"seed {seed}"

    def test_log_round_trips_through_file(self, registry, tmp_path):
        records, live_snapshot = record_scripted_session(registry, 101)
        path = tmp_path / "session.ndjson"
        write_event_log(records, path)
        loaded = read_event_log(path)
        assert loaded == records
        assert replay_session(loaded, registry).snapshot_json() == live_snapshot

    def test_replay_requires_creation_header(self, registry):
        with pytest.raises(ValueError, match="SessionCreated"):
            replay_session(
                [EventRecord(seq=0, session_id="x", kind=SESSION_CLOSED, at=0, payload={})], registry
            )

    def test_sequences_are_gap_free(self, registry):
        records, _ = record_scripted_session(registry, 7)
        assert [r.seq for r in records] == list(range(len(records)))

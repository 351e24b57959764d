import json
import math
import random
import threading
import time

import pytest
from fastapi.testclient import TestClient

from rescueaid.engine.eventlog import (
    DISTRIBUTION_UPDATED,
    SESSION_CLOSED,
    SESSION_CREATED,
    read_event_log,
    replay_session,
)
from rescueaid.groups import VitalKind, CANONICAL_UNITS
from rescueaid.service.config import ServiceConfig, parse_config_text
from rescueaid.service.core import ServiceCore, ServiceError
from rescueaid.service.demo import make_switch_scenario, run_demo
from rescueaid.service.http import build_app
from rescueaid.vitals.framing import encode_frame
from rescueaid.vitals.samples import VitalSample


def make_core(desk_bundle, **config_kwargs):
    return ServiceCore(config=ServiceConfig(**config_kwargs), bundle=desk_bundle)


def burst(at_ms, values):
    frames = b""
    for kind, value in values.items():
        frames += encode_frame(
            VitalSample(device_id="t", kind=kind, value=value, unit=CANONICAL_UNITS[kind], at=at_ms)
        )
    return frames


RESP_PATTERN = {VitalKind.SPO2: 81.0, VitalKind.RESP_RATE: 30.0, VitalKind.HEART_RATE: 96.0, VitalKind.SYS_BP: 118.0}


def wait_for(predicate, timeout=5.0, interval=0.005):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        if predicate():
            return True
        time.sleep(interval)
    return False


class TestConfig:
    def test_parse_and_defaults(self):
        config = parse_config_text("# comment\nlisten_port = 9001\nswitch_margin = 0.2\nlanguage_default = de\n")
        assert config.listen_port == 9001
        assert config.switch_margin == 0.2
        assert config.language_default == "de"
        assert config.window_ms == 10_000

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError, match="unknown key"):
            parse_config_text("nonsense = 1\n")

    def test_validate_checks_paths(self, tmp_path):
        config = ServiceConfig(model_path=tmp_path / "missing.json")
        with pytest.raises(ValueError, match="model_path"):
            config.validate()


class TestSessionLifecycle:
    def test_create_close_and_distinct_ids(self, desk_bundle):
        core = make_core(desk_bundle)
        try:
            a, rec_a = core.create_session()
            b, _ = core.create_session()
            assert a != b
            assert rec_a["active_group"] == "pulmonary"  # uniform tie-break
        finally:
            core.shutdown()

    def test_unsupported_language_rejected(self, desk_bundle):
        core = make_core(desk_bundle)
        try:
            with pytest.raises(ServiceError, match="language"):
                core.create_session("fr")
        finally:
            core.shutdown()

    def test_no_samples_no_tick_events(self, desk_bundle):
        core = make_core(desk_bundle)
        try:
            session_id, _ = core.create_session()
            time.sleep(0.3)
            kinds = [r.kind for r in core.events_snapshot(session_id)]
            assert DISTRIBUTION_UPDATED not in kinds
        finally:
            core.shutdown()

    def test_close_is_clean_no_event_after_closed(self, desk_bundle):
        core = make_core(desk_bundle)
        session_id, _ = core.create_session()
        core.ingest_frames(burst(0, RESP_PATTERN))
        wait_for(lambda: any(r.kind == DISTRIBUTION_UPDATED for r in core.events_snapshot(session_id)))
        core.close_session(session_id)
        # late frames must not generate events
        core.ingest_frames(burst(5000, RESP_PATTERN))
        time.sleep(0.3)
        kinds = [r.kind for r in core.events_snapshot(session_id)]
        assert kinds[-1] == SESSION_CLOSED

    def test_recognition_tick_emits_distribution(self, desk_bundle):
        core = make_core(desk_bundle)
        try:
            session_id, _ = core.create_session()
            core.ingest_frames(burst(0, RESP_PATTERN))
            assert wait_for(
                lambda: any(r.kind == DISTRIBUTION_UPDATED for r in core.events_snapshot(session_id))
            )
            tick = next(r for r in core.events_snapshot(session_id) if r.kind == DISTRIBUTION_UPDATED)
            assert tick.payload["produced_at"] == 0
            probabilities = tick.payload["probabilities"]
            assert max(probabilities) > 0.5
            assert probabilities.index(max(probabilities)) == 3  # respiratory ordinal
        finally:
            core.shutdown()


class TestEventStreamCore:
    def scripted(self, core):
        session_id, _ = core.create_session()
        for i in range(5):
            core.ingest_frames(burst(i * 2000, RESP_PATTERN))
            wait_for(
                lambda i=i: any(
                    r.kind == DISTRIBUTION_UPDATED and r.payload["produced_at"] >= i * 2000
                    for r in core.events_snapshot(session_id)
                )
            )
        core.close_session(session_id)
        return session_id

    def test_subscribe_from_zero_replays_full_history(self, desk_bundle):
        core = make_core(desk_bundle)
        session_id = self.scripted(core)
        full = core.events_snapshot(session_id)
        streamed = list(core.subscribe_events(session_id, from_seq=0))
        assert [r.seq for r in streamed] == [r.seq for r in full]
        assert streamed[0].kind == SESSION_CREATED
        assert streamed[-1].kind == SESSION_CLOSED

    def test_sequences_gap_free_and_strictly_increasing(self, desk_bundle):
        core = make_core(desk_bundle)
        session_id = self.scripted(core)
        sequences = [r.seq for r in core.events_snapshot(session_id)]
        assert sequences == list(range(len(sequences)))

    def test_chaos_reconnect_loses_nothing(self, desk_bundle):
        core = make_core(desk_bundle)
        rng = random.Random(13)

        session_id, _ = core.create_session()
        collected = []
        cursor = 0
        done = threading.Event()

        def reader():
            nonlocal cursor
            while not done.is_set() or True:
                stop = threading.Event()
                count_before_drop = rng.randint(1, 6)
                received = 0
                for record in core.subscribe_events(session_id, from_seq=cursor, stop=stop):
                    if record.seq >= cursor:  # de-dup by sequence
                        collected.append(record)
                        cursor = record.seq + 1
                    received += 1
                    if record.kind == SESSION_CLOSED:
                        return
                    if received >= count_before_drop:
                        stop.set()  # simulated disconnect
                        break
                else:
                    if core._runtime(session_id).stream.closed:
                        return

        thread = threading.Thread(target=reader)
        thread.start()
        for i in range(6):
            core.ingest_frames(burst(i * 2000, RESP_PATTERN))
            time.sleep(0.03)
        core.close_session(session_id)
        done.set()
        thread.join(timeout=10)
        assert not thread.is_alive()

        full = core.events_snapshot(session_id)
        assert [r.seq for r in collected] == [r.seq for r in full]
        assert [r.kind for r in collected] == [r.kind for r in full]


class TestHttpApi:
    @pytest.fixture()
    def client(self, desk_bundle):
        core = make_core(desk_bundle)
        with TestClient(build_app(core)) as client:
            client.core = core
            yield client
        core.shutdown()

    def test_session_roundtrip(self, client):
        created = client.post("/sessions", json={"language": "de"})
        assert created.status_code == 201
        session_id = created.json()["session_id"]

        got = client.get(f"/sessions/{session_id}/recommendation")
        assert got.status_code == 200
        assert got.json()["recommendation"]["active_group"] == "pulmonary"

        closed = client.delete(f"/sessions/{session_id}")
        assert closed.status_code == 200

    def test_unknown_session_404_with_structured_error(self, client):
        got = client.get("/sessions/nope/recommendation")
        assert got.status_code == 404
        assert got.json()["error"]["code"] == "unknown-session"

    def test_bad_language_structured_error(self, client):
        got = client.post("/sessions", json={"language": "xx"})
        assert got.status_code == 400
        assert got.json()["error"]["code"] == "unsupported-language"

    def test_command_flow_and_rejections(self, client):
        session_id = client.post("/sessions", json={}).json()["session_id"]
        client.post("/ingest", content=burst(0, RESP_PATTERN))
        assert wait_for(
            lambda: any(
                r.kind == DISTRIBUTION_UPDATED for r in client.core.events_snapshot(session_id)
            )
        )
        rejected = client.post(f"/sessions/{session_id}/confirm", json={"node_id": "f_transport"})
        assert rejected.status_code == 409
        assert rejected.json()["error"]["code"] == "action-not-offered"

        confirmed = client.post(f"/sessions/{session_id}/confirm", json={"node_id": "f_assess"})
        assert confirmed.status_code == 200
        pending = confirmed.json()["recommendation"]["pending"]
        assert [p["id"] for p in pending] == ["q_airway_clear"]

        answered = client.post(
            f"/sessions/{session_id}/answer", json={"question_id": "q_airway_clear", "value": "yes"}
        )
        assert answered.status_code == 200
        assert answered.json()["recommendation"]["actionable"] == ["f_oxygen"]

        bad_switch = client.post(f"/sessions/{session_id}/accept-switch", json={"group": "cardiovascular"})
        assert bad_switch.status_code == 409

        overridden = client.post(
            f"/sessions/{session_id}/override", json={"group": "cardiovascular", "start": "start_acs"}
        )
        assert overridden.status_code == 200
        assert overridden.json()["recommendation"]["active_group"] == "cardiovascular"

    def test_ingest_reports_accepted_and_errors(self, client):
        client.post("/sessions", json={})
        good = encode_frame(
            VitalSample(device_id="d", kind=VitalKind.SPO2, value=95.0, unit="%", at=0)
        )
        bad = (5).to_bytes(2, "big") + b"notaj"
        response = client.post("/ingest", content=good + bad)
        body = response.json()
        assert body["accepted"] == 1
        assert len(body["errors"]) == 1

    def test_sse_stream_replays_and_resumes(self, client):
        session_id = client.post("/sessions", json={}).json()["session_id"]
        client.post("/ingest", content=burst(0, RESP_PATTERN))
        assert wait_for(
            lambda: any(r.kind == DISTRIBUTION_UPDATED for r in client.core.events_snapshot(session_id))
        )
        client.delete(f"/sessions/{session_id}")  # stream terminates at SessionClosed

        seen = []
        with client.stream("GET", f"/sessions/{session_id}/events?from=0") as stream:
            for line in stream.iter_lines():
                if line.startswith("data: "):
                    seen.append(json.loads(line[len("data: ") :]))
        assert [record["seq"] for record in seen] == list(range(len(seen)))
        assert seen[0]["kind"] == SESSION_CREATED
        assert seen[-1]["kind"] == SESSION_CLOSED

        # a reconnecting client resumes from its last sequence: no gap, no duplicates
        resume_at = 3
        resumed = []
        with client.stream("GET", f"/sessions/{session_id}/events?from={resume_at}") as stream:
            for line in stream.iter_lines():
                if line.startswith("data: "):
                    resumed.append(json.loads(line[len("data: ") :]))
        assert [record["seq"] for record in resumed] == [record["seq"] for record in seen[resume_at:]]


class TestEventLogPersistenceAndReplay:
    def test_demo_session_log_replays_bit_identical(self, desk_bundle, tmp_path):
        core = ServiceCore(config=ServiceConfig(event_log_dir=tmp_path), bundle=desk_bundle)
        result = run_demo(core=core, scenario=make_switch_scenario(), speed=math.inf)
        session_id = result["session_id"]

        live_state = core._sessions[session_id].engine.state
        records = read_event_log(tmp_path / f"{session_id}.ndjson")
        assert [r.kind for r in records] == [r.kind for r in result["records"]]

        replayed = replay_session(records, core.registry)
        assert replayed.snapshot_json() == live_state.snapshot_json()

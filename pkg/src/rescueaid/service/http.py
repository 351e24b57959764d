"""HTTP adapter over the service core.

Endpoints (JSON bodies unless noted):

    POST   /sessions                     {"language": "en"} -> {session_id, recommendation}
    POST   /sessions/{id}/confirm        {"node_id": ...} -> {recommendation}
    POST   /sessions/{id}/answer         {"question_id": ..., "value": ...}
    POST   /sessions/{id}/accept-switch  {"group": ...}
    POST   /sessions/{id}/override       {"group": ..., "start": ...}
    DELETE /sessions/{id}
    GET    /sessions/{id}/recommendation
    GET    /sessions/{id}/events?from=N   (server-sent events; id: = sequence)
    POST   /ingest                        (raw bytes: concatenated frames)
    GET    /healthz

Every rejected command returns a structured ``{"error": {code, message}}``
body; nothing is silently dropped.
"""

from __future__ import annotations

import time
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from rescueaid.engine.eventlog import SESSION_CLOSED
from rescueaid.service.core import ServiceCore, ServiceError


class CreateSessionBody(BaseModel):
    language: Optional[str] = None


class ConfirmBody(BaseModel):
    node_id: str


class AnswerBody(BaseModel):
    question_id: str
    value: str


class AcceptSwitchBody(BaseModel):
    group: str


class OverrideBody(BaseModel):
    group: str
    start: str


def build_app(core: ServiceCore) -> FastAPI:
    app = FastAPI(title="rescueaid service", version="0.1.0")
    app.state.core = core

    @app.exception_handler(ServiceError)
    async def service_error_handler(request: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content=exc.to_dict())

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "sessions": len(core.session_ids())}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody = None):
        language = body.language if body else None
        session_id, recommendation = core.create_session(language)
        return {"session_id": session_id, "recommendation": recommendation}

    @app.delete("/sessions/{session_id}")
    def close_session(session_id: str):
        core.close_session(session_id)
        return {"closed": session_id}

    @app.get("/sessions/{session_id}/recommendation")
    def recommendation(session_id: str):
        return {"recommendation": core.recommendation(session_id)}

    @app.post("/sessions/{session_id}/confirm")
    def confirm(session_id: str, body: ConfirmBody):
        return {"recommendation": core.confirm_action(session_id, body.node_id)}

    @app.post("/sessions/{session_id}/answer")
    def answer(session_id: str, body: AnswerBody):
        return {"recommendation": core.answer_question(session_id, body.question_id, body.value)}

    @app.post("/sessions/{session_id}/accept-switch")
    def accept_switch(session_id: str, body: AcceptSwitchBody):
        return {"recommendation": core.accept_switch(session_id, body.group)}

    @app.post("/sessions/{session_id}/override")
    def override(session_id: str, body: OverrideBody):
        return {"recommendation": core.override_path(session_id, body.group, body.start)}

    @app.post("/ingest")
    async def ingest(request: Request):
        data = await request.body()
        return core.ingest_frames(data)

    @app.get("/sessions/{session_id}/events")
    def events(session_id: str, from_seq: int = Query(0, alias="from")):
        runtime = core._runtime(session_id)  # 404 before the stream starts

        def generate():
            # poll + keepalive instead of a blocking wait: the generator
            # passes a yield point every interval, so client disconnects
            # tear it down promptly
            cursor = max(from_seq, 0)
            while True:
                batch = runtime.stream.snapshot(cursor)
                for record in batch:
                    cursor = record.seq + 1
                    yield f"id: {record.seq}\nevent: {record.kind}\ndata: {record.to_json()}\n\n"
                    if record.kind == SESSION_CLOSED:
                        return
                if runtime.stream.closed:
                    return
                yield ": keepalive\n\n"
                time.sleep(0.05)

        return StreamingResponse(generate(), media_type="text/event-stream")

    return app

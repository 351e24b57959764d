"""Per-session event stream: gap-free sequences, replayable subscriptions.

Record 0 is the SessionCreated header; operational events follow from
sequence 1. A subscriber passes the last sequence number it has seen (or -1
for everything) and receives the backlog followed by live events,
terminating after SessionClosed. Delivery is at-least-once across
reconnects; consumers de-duplicate by sequence number.
"""

from __future__ import annotations

import threading
from typing import Iterator, Optional

from rescueaid.engine.eventlog import SESSION_CLOSED, EventRecord


class SessionEventStream:
    def __init__(self, session_id: str):
        self.session_id = session_id
        self._records: list[EventRecord] = []
        self._cond = threading.Condition()
        self._closed = False

    def append(self, kind: str, at: int, payload: dict) -> EventRecord:
        with self._cond:
            record = EventRecord(
                seq=len(self._records), session_id=self.session_id, kind=kind, at=at, payload=payload
            )
            self._records.append(record)
            if kind == SESSION_CLOSED:
                self._closed = True
            self._cond.notify_all()
            return record

    def snapshot(self, from_seq: int = 0) -> list[EventRecord]:
        with self._cond:
            return self._records[max(from_seq, 0) :]

    @property
    def closed(self) -> bool:
        with self._cond:
            return self._closed

    def subscribe(self, from_seq: int = 0, poll_timeout: float = 0.5, stop: Optional[threading.Event] = None) -> Iterator[EventRecord]:
        """Yield records with seq >= from_seq, backlog first, then live.

        Ends after SessionClosed has been delivered, or when ``stop`` is
        set (checked between waits, so a disconnected client's generator
        terminates promptly).
        """
        cursor = max(from_seq, 0)
        while True:
            with self._cond:
                while cursor >= len(self._records) and not self._closed:
                    if stop is not None and stop.is_set():
                        return
                    self._cond.wait(timeout=poll_timeout)
                batch = self._records[cursor:]
            for record in batch:
                yield record
                cursor = record.seq + 1
                if record.kind == SESSION_CLOSED:
                    return
            if stop is not None and stop.is_set():
                return
            with self._cond:
                if self._closed and cursor >= len(self._records):
                    return

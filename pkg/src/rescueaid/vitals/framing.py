"""Bit-exact wire framing for vital samples.

Frame layout: a 2-byte big-endian payload length, then a UTF-8 JSON payload
``{"at","device","kind","unit","value"}`` (keys sorted, compact separators,
so encoding is canonical and round trips are byte-identical). Payloads above
1024 bytes are rejected. Decoding is total: any byte string yields either a
sample or a positioned :class:`FrameError`, never a crash.
"""

from __future__ import annotations

import json
import math

from rescueaid.groups import CANONICAL_UNITS, VitalKind
from rescueaid.vitals.samples import VitalSample

FRAME_MAX_PAYLOAD = 1024
_LENGTH_BYTES = 2


class FrameError(ValueError):
    """Malformed frame; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"byte {offset}: {message}")
        self.offset = offset


def encode_frame(sample: VitalSample) -> bytes:
    payload = json.dumps(
        {
            "at": sample.at,
            "device": sample.device_id,
            "kind": sample.kind.value,
            "unit": sample.unit,
            "value": sample.value,
        },
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    if len(payload) > FRAME_MAX_PAYLOAD:
        raise FrameError(f"payload of {len(payload)} bytes exceeds {FRAME_MAX_PAYLOAD}", 0)
    return len(payload).to_bytes(_LENGTH_BYTES, "big") + payload


def decode_frame(data: bytes, offset: int = 0) -> tuple[VitalSample, int]:
    """Decode one frame at ``offset``; returns (sample, next offset)."""
    if len(data) - offset < _LENGTH_BYTES:
        raise FrameError("truncated: missing length prefix", offset)
    length = int.from_bytes(data[offset : offset + _LENGTH_BYTES], "big")
    if length > FRAME_MAX_PAYLOAD:
        raise FrameError(f"declared payload of {length} bytes exceeds {FRAME_MAX_PAYLOAD}", offset)
    body_start = offset + _LENGTH_BYTES
    if len(data) - body_start < length:
        raise FrameError(f"truncated: payload needs {length} bytes, {len(data) - body_start} left", body_start)
    body = data[body_start : body_start + length]

    try:
        payload = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FrameError(f"payload is not valid JSON: {exc}", body_start) from exc
    if not isinstance(payload, dict):
        raise FrameError("payload must be a JSON object", body_start)

    for field in ("device", "kind", "value", "unit", "at"):
        if field not in payload:
            raise FrameError(f"payload missing field {field!r}", body_start)

    kind_id = payload["kind"]
    try:
        kind = VitalKind(kind_id)
    except ValueError:
        raise FrameError(f"unknown vital kind {kind_id!r}", body_start) from None
    if payload["unit"] != CANONICAL_UNITS[kind]:
        raise FrameError(
            f"unit {payload['unit']!r} does not match canonical {CANONICAL_UNITS[kind]!r} for {kind.value}",
            body_start,
        )
    try:
        value = float(payload["value"])
        at = int(payload["at"])
    except (TypeError, ValueError) as exc:
        raise FrameError(f"bad value/timestamp: {exc}", body_start) from exc
    if not math.isfinite(value):
        raise FrameError("value must be finite", body_start)

    sample = VitalSample(device_id=str(payload["device"]), kind=kind, value=value, unit=payload["unit"], at=at)
    return sample, body_start + length


def decode_frames(data: bytes) -> tuple[list[VitalSample], list[FrameError]]:
    """Decode a concatenation of frames, collecting errors without stopping.

    After a malformed frame the decoder resynchronizes at the next declared
    frame boundary when the length prefix was readable, else it stops.
    """
    samples: list[VitalSample] = []
    errors: list[FrameError] = []
    offset = 0
    while offset < len(data):
        try:
            sample, offset = decode_frame(data, offset)
            samples.append(sample)
        except FrameError as exc:
            errors.append(exc)
            if len(data) - offset < _LENGTH_BYTES:
                break
            length = int.from_bytes(data[offset : offset + _LENGTH_BYTES], "big")
            if length > FRAME_MAX_PAYLOAD or offset + _LENGTH_BYTES + length > len(data):
                break
            offset += _LENGTH_BYTES + length
    return samples, errors

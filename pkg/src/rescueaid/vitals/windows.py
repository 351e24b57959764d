"""Sliding-window aggregation of raw samples into a vitals snapshot."""

from __future__ import annotations

from typing import Iterable

from rescueaid.groups import VitalKind
from rescueaid.vitals.samples import VitalSample

#: Default aggregation window for live snapshots.
DEFAULT_WINDOW_MS = 10_000


def window_snapshot(samples: Iterable[VitalSample], window_ms: int, now: int) -> dict[VitalKind, float]:
    """Per-kind median of samples with timestamp in ``(now - window, now]``.

    The even-count median is the lower middle value, so the snapshot never
    contains a value no device actually measured. Kinds without samples in
    the window are absent from the map; arrival order is irrelevant.
    """
    if window_ms <= 0:
        raise ValueError("window must be positive")
    buckets: dict[VitalKind, list[float]] = {}
    for sample in samples:
        if now - window_ms < sample.at <= now:
            buckets.setdefault(sample.kind, []).append(sample.value)
    snapshot = {}
    for kind, values in buckets.items():
        values.sort()
        snapshot[kind] = values[(len(values) - 1) // 2]
    return snapshot

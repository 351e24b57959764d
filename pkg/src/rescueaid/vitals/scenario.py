"""Scripted device-stream scenarios: build, store, and replay them.

A scenario is an ordered timeline of vital samples and control-center
messages at millisecond offsets. Replay paces entries by wall clock at a
configurable speed (``math.inf`` means batch: everything at once); the
content and order are a pure function of the file, only the pacing varies.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, Optional, Union

import numpy as np

from rescueaid.groups import CANONICAL_UNITS, VitalKind
from rescueaid.vitals.samples import MissionDescription, VitalSample


@dataclass(frozen=True)
class TimelineEntry:
    offset_ms: int
    payload: Union[VitalSample, MissionDescription]


@dataclass
class Scenario:
    title: str
    seed: int = 0
    timeline: list[TimelineEntry] = field(default_factory=list)

    def __post_init__(self) -> None:
        offsets = [entry.offset_ms for entry in self.timeline]
        if any(b < a for a, b in zip(offsets, offsets[1:])):
            raise ValueError("timeline offsets must be non-decreasing")

    def duration_ms(self) -> int:
        return self.timeline[-1].offset_ms if self.timeline else 0


def save_scenario(scenario: Scenario, path: Union[str, Path]) -> None:
    entries = []
    for entry in scenario.timeline:
        payload = entry.payload
        if isinstance(payload, VitalSample):
            entries.append(
                {
                    "offset_ms": entry.offset_ms,
                    "type": "vital",
                    "device": payload.device_id,
                    "kind": payload.kind.value,
                    "value": payload.value,
                    "unit": payload.unit,
                }
            )
        else:
            entries.append(
                {
                    "offset_ms": entry.offset_ms,
                    "type": "mission",
                    "dispatch_code": payload.dispatch_code,
                    "text": payload.text,
                }
            )
    document = {"title": scenario.title, "seed": scenario.seed, "timeline": entries}
    Path(path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")


def load_scenario(path: Union[str, Path]) -> Scenario:
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    timeline = []
    for raw in document.get("timeline", []):
        offset = int(raw["offset_ms"])
        if raw.get("type") == "mission":
            payload: Union[VitalSample, MissionDescription] = MissionDescription(
                dispatch_code=raw.get("dispatch_code", ""), text=raw.get("text", ""), received_at=offset
            )
        else:
            kind = VitalKind(raw["kind"])
            payload = VitalSample(
                device_id=raw.get("device", "sim"),
                kind=kind,
                value=float(raw["value"]),
                unit=raw.get("unit", CANONICAL_UNITS[kind]),
                at=offset,
            )
        timeline.append(TimelineEntry(offset_ms=offset, payload=payload))
    return Scenario(title=document.get("title", ""), seed=int(document.get("seed", 0)), timeline=timeline)


def replay(
    scenario: Scenario,
    speed: float = 1.0,
    clock: Callable[[], float] = time.monotonic,
    sleep: Callable[[float], None] = time.sleep,
) -> Iterator[TimelineEntry]:
    """Yield timeline entries paced at ``offset / speed`` wall seconds.

    ``speed=math.inf`` is batch mode: every entry immediately, in order.
    """
    if not speed > 0:
        raise ValueError("speed must be positive")
    start = clock()
    for entry in scenario.timeline:
        if math.isfinite(speed):
            target = entry.offset_ms / 1000.0 / speed
            delay = target - (clock() - start)
            if delay > 0:
                sleep(delay)
        yield entry


@dataclass(frozen=True)
class ScenarioPhase:
    """Constant vital pattern held until ``until_ms`` into the scenario."""

    until_ms: int
    vitals: dict[VitalKind, float]
    mission: Optional[str] = None  # emitted once at phase start


#: Per-kind jitter applied by the pattern builder (same spirit as device noise).
PATTERN_JITTER = {
    VitalKind.HEART_RATE: 2.0,
    VitalKind.SPO2: 0.5,
    VitalKind.SYS_BP: 3.0,
    VitalKind.DIA_BP: 2.0,
    VitalKind.RESP_RATE: 0.8,
    VitalKind.TEMPERATURE: 0.1,
    VitalKind.BLOOD_GLUCOSE: 5.0,
}


def make_pattern_scenario(
    title: str,
    phases: list[ScenarioPhase],
    burst_ms: int = 4000,
    seed: int = 0,
    device_id: str = "sim",
) -> Scenario:
    """Build a scenario emitting one burst of all phase vitals per interval.

    Values get a small seeded Gaussian jitter, so the scenario is
    deterministic under its seed but not perfectly flat.
    """
    rng = np.random.default_rng(seed)
    timeline: list[TimelineEntry] = []
    phase_index = 0
    offset = 0
    total = phases[-1].until_ms
    mission_emitted: set[int] = set()
    while offset <= total:
        while offset >= phases[phase_index].until_ms and phase_index + 1 < len(phases):
            phase_index += 1
        phase = phases[phase_index]
        if phase.mission and phase_index not in mission_emitted:
            mission_emitted.add(phase_index)
            timeline.append(
                TimelineEntry(
                    offset_ms=offset,
                    payload=MissionDescription(dispatch_code=f"D{phase_index}", text=phase.mission, received_at=offset),
                )
            )
        for kind, mean in phase.vitals.items():
            value = float(mean + rng.normal(0.0, PATTERN_JITTER[kind]))
            timeline.append(
                TimelineEntry(
                    offset_ms=offset,
                    payload=VitalSample(
                        device_id=device_id, kind=kind, value=value, unit=CANONICAL_UNITS[kind], at=offset
                    ),
                )
            )
        offset += burst_ms
    return Scenario(title=title, seed=seed, timeline=timeline)

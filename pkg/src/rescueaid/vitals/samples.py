"""Timestamped measurements and control-center messages."""

from __future__ import annotations

import math
from dataclasses import dataclass

from rescueaid.groups import CANONICAL_UNITS, VitalKind


@dataclass(frozen=True)
class VitalSample:
    """One scalar reading from a (simulated) medical device."""

    device_id: str
    kind: VitalKind
    value: float
    unit: str
    at: int  # epoch milliseconds; the simulation clock in scripted runs

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"{self.kind.value}: non-finite value")
        expected = CANONICAL_UNITS[self.kind]
        if self.unit != expected:
            raise ValueError(f"{self.kind.value}: unit {self.unit!r} does not match canonical {expected!r}")


@dataclass(frozen=True)
class MissionDescription:
    """Dispatch information from the control center."""

    dispatch_code: str
    text: str
    received_at: int  # epoch milliseconds

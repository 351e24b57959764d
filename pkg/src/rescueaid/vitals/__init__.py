"""Device streams: wire framing, scenario replay, windowed aggregation."""

from rescueaid.vitals.framing import (
    FRAME_MAX_PAYLOAD,
    FrameError,
    decode_frame,
    decode_frames,
    encode_frame,
)
from rescueaid.vitals.samples import MissionDescription, VitalSample
from rescueaid.vitals.scenario import (
    Scenario,
    ScenarioPhase,
    TimelineEntry,
    load_scenario,
    make_pattern_scenario,
    replay,
    save_scenario,
)
from rescueaid.vitals.windows import window_snapshot

__all__ = [
    "FRAME_MAX_PAYLOAD",
    "FrameError",
    "MissionDescription",
    "Scenario",
    "ScenarioPhase",
    "TimelineEntry",
    "VitalSample",
    "decode_frame",
    "decode_frames",
    "encode_frame",
    "load_scenario",
    "make_pattern_scenario",
    "replay",
    "save_scenario",
    "window_snapshot",
]

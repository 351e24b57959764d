"""Shared enumerations: complication groups and vital-sign kinds.

Every subsystem indexes classifier outputs by the group ordinal and keys
vitals by :class:`VitalKind`, so both enumerations live here rather than in
any one pipeline stage.
"""

from __future__ import annotations

import enum


class ComplicationGroup(enum.Enum):
    """The ten coarse complication groups used as classifier outputs.

    Ordinals are stable and index probability vectors; string values are
    stable IDs used in files and on the wire.
    """

    PULMONARY = "pulmonary"
    CNS = "cns"
    CARDIOVASCULAR = "cardiovascular"
    RESPIRATORY = "respiratory"
    ABDOMINAL = "abdominal"
    PSYCHIATRIC = "psychiatric"
    METABOLIC = "metabolic"
    GYNECOLOGIC_OBSTETRICAL = "gynecologic-obstetrical"
    INFECTION = "infection"
    OTHER_SPECIAL = "other-special"

    @property
    def ordinal(self) -> int:
        return _ORDINALS[self]

    @classmethod
    def from_ordinal(cls, ordinal: int) -> "ComplicationGroup":
        return _BY_ORDINAL[ordinal]

    @classmethod
    def from_id(cls, group_id: str) -> "ComplicationGroup":
        try:
            return cls(group_id)
        except ValueError:
            raise ValueError(f"unknown complication group id: {group_id!r}") from None


_ORDER = [
    ComplicationGroup.PULMONARY,
    ComplicationGroup.CNS,
    ComplicationGroup.CARDIOVASCULAR,
    ComplicationGroup.RESPIRATORY,
    ComplicationGroup.ABDOMINAL,
    ComplicationGroup.PSYCHIATRIC,
    ComplicationGroup.METABOLIC,
    ComplicationGroup.GYNECOLOGIC_OBSTETRICAL,
    ComplicationGroup.INFECTION,
    ComplicationGroup.OTHER_SPECIAL,
]
_ORDINALS = {group: i for i, group in enumerate(_ORDER)}
_BY_ORDINAL = {i: group for i, group in enumerate(_ORDER)}

NUM_GROUPS = len(_ORDER)


class VitalKind(enum.Enum):
    """Scalar vital-sign channels accepted from (simulated) devices."""

    HEART_RATE = "HeartRate"
    SPO2 = "SpO2"
    SYS_BP = "SysBP"
    DIA_BP = "DiaBP"
    RESP_RATE = "RespRate"
    TEMPERATURE = "Temperature"
    BLOOD_GLUCOSE = "BloodGlucose"

    @classmethod
    def from_id(cls, kind_id: str) -> "VitalKind":
        try:
            return cls(kind_id)
        except ValueError:
            raise ValueError(f"unknown vital kind: {kind_id!r}") from None


#: Canonical unit per vital kind; frames and case tables must agree with it.
CANONICAL_UNITS = {
    VitalKind.HEART_RATE: "bpm",
    VitalKind.SPO2: "%",
    VitalKind.SYS_BP: "mmHg",
    VitalKind.DIA_BP: "mmHg",
    VitalKind.RESP_RATE: "breaths/min",
    VitalKind.TEMPERATURE: "degC",
    VitalKind.BLOOD_GLUCOSE: "mg/dL",
}

#: Default normalization spans for feature assembly, wide enough to cover
#: everything a scenario can realistically emit.
DEFAULT_VITAL_RANGES = {
    VitalKind.HEART_RATE: (20.0, 220.0),
    VitalKind.SPO2: (50.0, 100.0),
    VitalKind.SYS_BP: (50.0, 250.0),
    VitalKind.DIA_BP: (20.0, 150.0),
    VitalKind.RESP_RATE: (4.0, 60.0),
    VitalKind.TEMPERATURE: (30.0, 43.0),
    VitalKind.BLOOD_GLUCOSE: (20.0, 600.0),
}

__all__ = [
    "ComplicationGroup",
    "VitalKind",
    "CANONICAL_UNITS",
    "DEFAULT_VITAL_RANGES",
    "NUM_GROUPS",
]

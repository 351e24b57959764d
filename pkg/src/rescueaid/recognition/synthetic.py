"""Synthetic desk-scale case generator.

Real rescue records cannot ship with the repository, so training and the
acceptance suite run on cases sampled from per-group profiles: one Gaussian
per vital plus a keyword pool for the text fields. Profiles are deliberately
well separated. Text fields are dropped with some probability so the
classifier also learns vitals-only situations, which is what live inference
mostly sees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from rescueaid.case_data.tables import Table
from rescueaid.groups import ComplicationGroup, VitalKind

#: Probability that a generated record omits each text field.
TEXT_DROPOUT = 0.3

_FILLER = ["patient", "on", "scene", "crew", "reports"]


@dataclass(frozen=True)
class GroupProfile:
    """Sampling profile for one complication group."""

    group: ComplicationGroup
    vitals: dict[VitalKind, tuple[float, float]] = field(default_factory=dict)  # kind -> (mean, sd)
    keywords: tuple[str, ...] = ()


def _profile(group, keywords, **vitals):
    return GroupProfile(
        group=group,
        vitals={VitalKind(k): v for k, v in vitals.items()},
        keywords=tuple(keywords),
    )


DEFAULT_PROFILES: list[GroupProfile] = [
    _profile(
        ComplicationGroup.PULMONARY, ["copd", "emphysema", "bronchitis"],
        HeartRate=(98, 6), SpO2=(86, 2), SysBP=(125, 8), DiaBP=(80, 6),
        RespRate=(24, 2), Temperature=(37.3, 0.3), BloodGlucose=(110, 15),
    ),
    _profile(
        ComplicationGroup.CNS, ["seizure", "stroke", "hemiparesis"],
        HeartRate=(66, 6), SpO2=(96, 1.5), SysBP=(168, 8), DiaBP=(96, 6),
        RespRate=(12, 2), Temperature=(36.8, 0.3), BloodGlucose=(105, 15),
    ),
    _profile(
        ComplicationGroup.CARDIOVASCULAR, ["infarction", "angina", "arrhythmia"],
        HeartRate=(122, 6), SpO2=(95, 1.5), SysBP=(175, 8), DiaBP=(98, 6),
        RespRate=(16, 2), Temperature=(36.9, 0.3), BloodGlucose=(120, 15),
    ),
    _profile(
        ComplicationGroup.RESPIRATORY, ["dyspnea", "asthma", "stridor"],
        HeartRate=(96, 6), SpO2=(81, 2), SysBP=(118, 8), DiaBP=(76, 6),
        RespRate=(30, 2), Temperature=(37.0, 0.3), BloodGlucose=(100, 15),
    ),
    _profile(
        ComplicationGroup.ABDOMINAL, ["appendicitis", "ileus", "colic"],
        HeartRate=(88, 6), SpO2=(97, 1.5), SysBP=(112, 8), DiaBP=(72, 6),
        RespRate=(15, 2), Temperature=(37.6, 0.3), BloodGlucose=(115, 15),
    ),
    _profile(
        ComplicationGroup.PSYCHIATRIC, ["agitation", "psychosis", "intoxication"],
        HeartRate=(104, 6), SpO2=(98.5, 1.0), SysBP=(128, 8), DiaBP=(82, 6),
        RespRate=(17, 2), Temperature=(36.9, 0.3), BloodGlucose=(98, 15),
    ),
    _profile(
        ComplicationGroup.METABOLIC, ["hypoglycemia", "ketoacidosis", "exsiccosis"],
        HeartRate=(92, 6), SpO2=(96, 1.5), SysBP=(108, 8), DiaBP=(68, 6),
        RespRate=(19, 2), Temperature=(36.4, 0.3), BloodGlucose=(320, 25),
    ),
    _profile(
        ComplicationGroup.GYNECOLOGIC_OBSTETRICAL, ["contractions", "eclampsia", "obstetric"],
        HeartRate=(90, 6), SpO2=(98, 1.5), SysBP=(96, 8), DiaBP=(56, 6),
        RespRate=(20, 2), Temperature=(37.3, 0.3), BloodGlucose=(82, 15),
    ),
    _profile(
        ComplicationGroup.INFECTION, ["fever", "erysipelas", "urosepsis"],
        HeartRate=(108, 6), SpO2=(93, 1.5), SysBP=(98, 8), DiaBP=(60, 6),
        RespRate=(22, 2), Temperature=(39.6, 0.3), BloodGlucose=(130, 15),
    ),
    _profile(
        ComplicationGroup.OTHER_SPECIAL, ["laceration", "contusion", "syncope"],
        HeartRate=(62, 5), SpO2=(97, 1.5), SysBP=(142, 8), DiaBP=(88, 6),
        RespRate=(11, 2), Temperature=(36.2, 0.3), BloodGlucose=(105, 15),
    ),
]

TABLE_COLUMNS = (
    ["case_id", "recorded_at", "mission"]
    + [kind.value for kind in VitalKind]
    + ["history_text", "diagnosis_text", "diagnosis_codes", "labels"]
)


def generate_synthetic_cases(profiles: Sequence[GroupProfile], n: int, seed: int) -> Table:
    """Sample ``n`` labeled case rows, cycling groups for a uniform split.

    Deterministic under seed. The output is an ordinary case table, so the
    whole case-data pipeline (dictionary, filter, encode) runs unchanged on
    synthetic data.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        profile = profiles[i % len(profiles)]
        row: dict = {
            "case_id": f"syn-{i:05d}",
            "recorded_at": f"2024-01-01T00:{i % 60:02d}:00",
            "labels": profile.group.value,
        }
        for kind, (mean, sd) in profile.vitals.items():
            row[kind.value] = float(rng.normal(mean, sd))
        pool = list(profile.keywords)
        words = [pool[int(rng.integers(len(pool)))] for _ in range(2)]
        filler = _FILLER[int(rng.integers(len(_FILLER)))]
        if rng.random() >= TEXT_DROPOUT:
            row["diagnosis_text"] = f"{words[0]} suspected, {filler}"
        if rng.random() >= TEXT_DROPOUT:
            row["history_text"] = f"history of {words[1]}"
        if rng.random() >= TEXT_DROPOUT:
            row["mission"] = f"{filler} {words[0]}"
        rows.append(row)
    return Table(columns=list(TABLE_COLUMNS), rows=rows, name=f"synthetic-{seed}")


def load_profiles(path: Union[str, Path]) -> list[GroupProfile]:
    """Load profiles from JSON: [{group, vitals: {kind: [mean, sd]}, keywords}]."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    profiles = []
    for raw in payload:
        profiles.append(
            GroupProfile(
                group=ComplicationGroup.from_id(raw["group"]),
                vitals={
                    VitalKind.from_id(kind): (float(ms[0]), float(ms[1]))
                    for kind, ms in raw["vitals"].items()
                },
                keywords=tuple(raw.get("keywords", [])),
            )
        )
    return profiles


def save_profiles(profiles: Sequence[GroupProfile], path: Union[str, Path]) -> None:
    payload = [
        {
            "group": p.group.value,
            "vitals": {kind.value: list(ms) for kind, ms in p.vitals.items()},
            "keywords": list(p.keywords),
        }
        for p in profiles
    ]
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")

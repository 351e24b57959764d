#!/usr/bin/env python3
"""Regenerate committed fixture and golden files.

Run from the repo root. Goldens are produced once, reviewed, and pinned;
rerunning must be a no-op unless formats intentionally changed.
"""

from pathlib import Path

import numpy as np

from rescueaid.assets import data_path, graphs_dir
from rescueaid.case_data import build_dictionary
from rescueaid.case_data.tables import read_csv
from rescueaid.engine import SessionEngine
from rescueaid.groups import NUM_GROUPS, ComplicationGroup, VitalKind
from rescueaid.recognition.network import ComplicationDistribution
from rescueaid.treatment import GraphRegistry, parse_sop, serialize
from rescueaid.service.demo import make_switch_scenario
from rescueaid.vitals.scenario import save_scenario

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"

MINIMAL_SOP = """
meta graph_id "mini"
node s StartEvent "start"
node f Function "do the one thing"
node end EndEvent "done"
edge s f
edge f end
bind cardiovascular s
"""

TOY_TABLES = {
    "cases_a.csv": (
        "case_id,SpO2,mission\n"
        "a,95,\n"
        "b,88,fall at home\n"
        "c,,chest pain\n"
        "d,97,\n"
    ),
    "cases_b.csv": (
        "case_id,HeartRate,SpO2\n"
        "b,90,89\n"
        "e,120,\n"
        "f,60,99\n"
        "g,75,96\n"
    ),
    "cases_c.csv": (
        "case_id,diagnosis_text,labels\n"
        "c,suspected acs,cardiovascular\n"
        "h,copd exacerbation,pulmonary\n"
        "i,seizure observed,cns\n"
        "j,,\n"
    ),
}


def main() -> None:
    (FIXTURES / "golden").mkdir(parents=True, exist_ok=True)
    (FIXTURES / "data").mkdir(parents=True, exist_ok=True)

    # golden serialized three-node graph
    (FIXTURES / "golden" / "mini.graph.json").write_bytes(serialize(parse_sop(MINIMAL_SOP)))

    # toy CSV tables for the data-pipeline criterion
    for name, text in TOY_TABLES.items():
        (FIXTURES / "data" / name).write_text(text, encoding="utf-8")

    # golden dictionary profiled from the first toy table
    table = read_csv(FIXTURES / "data" / "cases_a.csv")
    build_dictionary(table).save(FIXTURES / "golden" / "dictionary.json")

    # golden recommendation: pinned engine snapshot
    registry = GraphRegistry.from_directory(graphs_dir())
    engine = SessionEngine(registry, session_id="golden")
    probabilities = np.full(NUM_GROUPS, 0.1 / 9)
    probabilities[ComplicationGroup.CARDIOVASCULAR.ordinal] = 0.9
    engine.update_vitals({VitalKind.SYS_BP: 140.0, VitalKind.SPO2: 96.0}, at=1000)
    engine.ingest_distribution(ComplicationDistribution(probabilities=probabilities, produced_at=1000))
    engine.confirm_action("f_ecg", at=2000)
    recommendation = engine.current_recommendation(depth=5)
    import json

    (FIXTURES / "golden" / "recommendation.json").write_text(
        json.dumps(recommendation.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    # shipped demo scenario file (packaged data)
    scenario_dir = data_path("scenarios")
    scenario_dir.mkdir(parents=True, exist_ok=True)
    save_scenario(make_switch_scenario(), scenario_dir / "switch_demo.json")

    print("fixtures regenerated under", FIXTURES, "and", scenario_dir)


if __name__ == "__main__":
    main()

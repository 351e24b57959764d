"""Guard logic and a hand-driven session: questions, answers, switching.

Run:  python3 demos/04_guards_and_sessions.py
"""

import numpy as np

from rescueaid.assets import graphs_dir
from rescueaid.engine import SessionEngine
from rescueaid.groups import NUM_GROUPS, ComplicationGroup, VitalKind
from rescueaid.recognition.network import ComplicationDistribution
from rescueaid.treatment import GraphRegistry, Truth, eval_guard, parse_guard
from rescueaid.treatment.model import DataContext

# Guards evaluate in Kleene three-valued logic: missing data is Unknown,
# not an error, and Unknown surfaces as a question to the operator.
ctx = DataContext()
guard = parse_guard("SpO2 < 90 and answer(q_airway_clear) = yes")
print("no data:           ", eval_guard(guard, ctx))
ctx.set_vital(VitalKind.SPO2, 85.0, at=0)
print("SpO2=85 only:      ", eval_guard(guard, ctx))
ctx.set_answer("q_airway_clear", "yes")
print("plus answer yes:   ", eval_guard(guard, ctx))
assert eval_guard(guard, ctx) is Truth.TRUE


def dist(**named):
    probabilities = np.zeros(NUM_GROUPS)
    for name, p in named.items():
        probabilities[ComplicationGroup.from_id(name.replace("_", "-")).ordinal] = p
    rest = probabilities == 0
    probabilities[rest] = (1.0 - probabilities.sum()) / rest.sum()
    return ComplicationDistribution(probabilities=probabilities)


# A session couples the classifier with the graphs. The first distribution
# positions it; afterwards a rival group must clear the hysteresis policy
# (margin 0.10 on 3 consecutive updates) to produce a switch suggestion.
registry = GraphRegistry.from_directory(graphs_dir())
engine = SessionEngine(registry, session_id="demo")

engine.ingest_distribution(dist(respiratory=0.8))
print("\npositioned:", engine.state.active_group.value, "start", engine.state.active_start)
print("actionable:", engine.actionable_functions())

engine.confirm_action("f_assess", at=1000)
recommendation = engine.current_recommendation()
print("after confirm, pending:", [(p.kind, p.identifier) for p in recommendation.pending])

engine.answer_question("q_airway_clear", "yes", at=2000)
print("after answer, actionable:", engine.current_recommendation().actionable)

rival = dist(cardiovascular=0.55, respiratory=0.25)
for i in range(3):
    suggestion = engine.ingest_distribution(rival)
    print(f"update {i + 1}: suggestion = {suggestion.group.value if suggestion else None}")

engine.accept_switch(ComplicationGroup.CARDIOVASCULAR, at=5000)
print("switched to:", engine.state.active_group.value, "start", engine.state.active_start)
print("action log:", [(e.kind, e.node_id, e.group) for e in engine.state.action_log])

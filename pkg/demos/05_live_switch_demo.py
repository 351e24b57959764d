"""The full loop: simulator, recognition service, scripted operator.

The scenario streams respiratory-pattern vitals, then shifts to a
cardiovascular pattern at the 60 s simulation mark. Watch the service
position the session, raise the one airway question, and suggest the path
switch a few recognition ticks after the shift.

Run:  python3 demos/05_live_switch_demo.py        (trains a small model first)
"""

from collections import Counter

from rescueaid.service.demo import make_switch_scenario, run_demo, train_demo_bundle

print("training desk-scale model (seeded, a few seconds)...")
bundle = train_demo_bundle()

result = run_demo(scenario=make_switch_scenario(), bundle=bundle, printer=print)

kinds = Counter(record.kind for record in result["records"])
print("\nevent mix:", dict(kinds))
print("operator steps:", result["steps"])
if result["latencies_ms"]:
    worst = max(result["latencies_ms"])
    print(f"recognition latency: worst {worst:.1f} ms over {len(result['latencies_ms'])} ticks")

suggestion = next(r for r in result["records"] if r.kind == "SwitchSuggested")
print(f"switch suggested at {suggestion.at / 1000:.0f}s sim time "
      f"(shift was at 60s): {suggestion.payload['group']} "
      f"p={suggestion.payload['probability']:.3f}")

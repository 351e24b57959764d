"""Treatment graphs: parse SOP markup, validate, query, store.

Run:  python3 demos/03_treatment_graphs.py
"""

from rescueaid.assets import graphs_dir
from rescueaid.groups import ComplicationGroup
from rescueaid.treatment import (
    GraphRegistry,
    deserialize,
    enumerate_paths,
    parse_sop,
    serialize,
    validate_epc,
)
from rescueaid.treatment.parser import SopParseError, load_sop

# The shipped tracks live as line-oriented SOP markup (see docs/sop-grammar.md).
graph = load_sop(graphs_dir() / "acs.sop")
print(f"{graph.graph_id}: {len(graph.nodes)} nodes, {len(graph.edges)} edges, "
      f"bindings: {[g.value for g in graph.start_bindings]}")

# Validation checks EPC shape with stable rule ids; the shipped fixtures are clean.
report = validate_epc(graph)
print(f"validation: {len(report.errors())} errors, {len(report.warnings())} warnings")

# A broken document never yields a half-graph: all positioned errors at once.
try:
    parse_sop('node a Function "act"\nedge a ghost\nnode a Event "dupe"\n')
except SopParseError as exc:
    print("broken document rejected with:")
    for error in exc.errors:
        print("   ", error)

# Path enumeration: every split contributes one branch per path.
paths = enumerate_paths(graph, "start_acs", max_depth=30)
print(f"{len(paths)} simple paths from start_acs; first:")
print("   ", " -> ".join(paths[0]))

# Storage is single-file JSON with a CRC32 checksum; round trips are exact.
data = serialize(graph)
again = deserialize(data)
print(f"serialize/deserialize round trip exact: {again.structurally_equal(graph)} ({len(data)} bytes)")

# A registry resolves complication groups to their start nodes, file order first.
registry = GraphRegistry.from_directory(graphs_dir())
for group in (ComplicationGroup.CARDIOVASCULAR, ComplicationGroup.RESPIRATORY, ComplicationGroup.METABOLIC):
    resolved_graph, start = registry.resolve(group)
    print(f"  {group.value:16s} -> {resolved_graph.graph_id}:{start}")

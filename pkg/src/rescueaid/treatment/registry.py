"""Registry of loaded treatment graphs, resolved per complication group.

Graphs load from a directory in filename order (``.sop`` markup or
``.graph.json`` serialized files); the first graph binding a group wins.
Graphs are immutable after load and all lookups are read-only, so the
registry is freely shared across sessions.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Union

from rescueaid.groups import ComplicationGroup
from rescueaid.treatment.model import TreatmentGraph
from rescueaid.treatment.parser import load_sop
from rescueaid.treatment.store import load_graph
from rescueaid.treatment.validation import validate_epc


class GraphLoadError(ValueError):
    """A graph file failed to parse or validate at registry load time."""


class GraphRegistry:
    def __init__(self, graphs: Optional[list[TreatmentGraph]] = None):
        self.graphs: list[TreatmentGraph] = list(graphs or [])

    @classmethod
    def from_directory(cls, directory: Union[str, Path]) -> "GraphRegistry":
        directory = Path(directory)
        if not directory.is_dir():
            raise GraphLoadError(f"graph registry directory {directory} does not exist")
        graphs = []
        for path in sorted(directory.iterdir()):
            if path.suffix == ".sop":
                graph = load_sop(path)
            elif path.name.endswith(".graph.json"):
                graph = load_graph(path)
            else:
                continue
            report = validate_epc(graph)
            if not report.ok():
                problems = "; ".join(f"{f.rule}@{f.subject}" for f in report.errors())
                raise GraphLoadError(f"{path.name} failed validation: {problems}")
            graphs.append(graph)
        return cls(graphs)

    def add(self, graph: TreatmentGraph) -> None:
        self.graphs.append(graph)

    def resolve(self, group: ComplicationGroup) -> Optional[tuple[TreatmentGraph, str]]:
        """First graph binding the group, with its first bound start node."""
        for graph in self.graphs:
            starts = graph.start_nodes_for(group)
            if starts:
                return graph, starts[0]
        return None

    def bound_groups(self) -> set[ComplicationGroup]:
        bound = set()
        for graph in self.graphs:
            bound.update(graph.start_bindings.keys())
        return bound

    def graph_by_id(self, graph_id: str) -> TreatmentGraph:
        for graph in self.graphs:
            if graph.graph_id == graph_id:
                return graph
        raise KeyError(f"no graph with id {graph_id!r}")

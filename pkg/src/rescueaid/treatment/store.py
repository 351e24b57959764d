"""Single-file JSON graph storage with version and checksum guards.

Layout: ``{"format_version": "1.0", "checksum": <crc32>, "body": {...}}``
where the checksum is the CRC32 of the canonical (sorted, compact) JSON
encoding of the body. Guards are stored in their canonical text form and
re-parsed on load, so a round trip is structurally exact.
"""

from __future__ import annotations

import json
import zlib
from pathlib import Path
from typing import Union

from rescueaid.groups import ComplicationGroup
from rescueaid.treatment.guards import guard_to_text, parse_guard
from rescueaid.treatment.model import EpcEdge, EpcNode, NodeKind, TreatmentGraph

GRAPH_FORMAT_VERSION = "1.0"


class GraphStoreError(ValueError):
    """Base error for graph (de)serialization problems."""


class ChecksumError(GraphStoreError):
    """The payload is truncated or corrupt: checksum does not match."""


class VersionError(GraphStoreError):
    """The file was written by an incompatible (newer) format version."""


def _body(graph: TreatmentGraph) -> dict:
    return {
        "graph_id": graph.graph_id,
        "nodes": [
            {"id": n.id, "kind": n.kind.value, "label": n.label, "question": n.question}
            for n in graph.nodes.values()
        ],
        "edges": [
            {
                "from": e.source,
                "to": e.target,
                "guard": guard_to_text(e.guard) if e.guard is not None else None,
            }
            for e in graph.edges
        ],
        "start_bindings": {group.value: ids for group, ids in graph.start_bindings.items()},
        "questions": graph.questions,
        "metadata": graph.metadata,
    }


def _canonical(body: dict) -> bytes:
    return json.dumps(body, sort_keys=True, separators=(",", ":")).encode("utf-8")


def serialize(graph: TreatmentGraph) -> bytes:
    body = _body(graph)
    checksum = zlib.crc32(_canonical(body))
    document = {"format_version": GRAPH_FORMAT_VERSION, "checksum": checksum, "body": body}
    return (json.dumps(document, sort_keys=True, indent=2) + "\n").encode("utf-8")


def deserialize(data: bytes) -> TreatmentGraph:
    try:
        document = json.loads(data.decode("utf-8"))
        version = document["format_version"]
        checksum = document["checksum"]
        body = document["body"]
    except (ValueError, KeyError, UnicodeDecodeError) as exc:
        raise ChecksumError(f"graph file is truncated or corrupt: {exc}") from exc

    major = str(version).split(".")[0]
    if major != GRAPH_FORMAT_VERSION.split(".")[0]:
        raise VersionError(f"graph format version {version} is not supported (expected {GRAPH_FORMAT_VERSION})")
    if zlib.crc32(_canonical(body)) != checksum:
        raise ChecksumError("graph body does not match its checksum")

    nodes = {
        raw["id"]: EpcNode(
            id=raw["id"], kind=NodeKind(raw["kind"]), label=raw.get("label", ""), question=raw.get("question")
        )
        for raw in body["nodes"]
    }
    edges = [
        EpcEdge(
            source=raw["from"],
            target=raw["to"],
            guard=parse_guard(raw["guard"]) if raw.get("guard") else None,
        )
        for raw in body["edges"]
    ]
    bindings = {
        ComplicationGroup.from_id(group_id): list(ids)
        for group_id, ids in body.get("start_bindings", {}).items()
    }
    return TreatmentGraph(
        graph_id=body["graph_id"],
        nodes=nodes,
        edges=edges,
        start_bindings=bindings,
        questions=dict(body.get("questions", {})),
        metadata=dict(body.get("metadata", {})),
    )


def save_graph(graph: TreatmentGraph, path: Union[str, Path]) -> None:
    Path(path).write_bytes(serialize(graph))


def load_graph(path: Union[str, Path]) -> TreatmentGraph:
    return deserialize(Path(path).read_bytes())

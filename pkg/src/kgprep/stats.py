"""Graph statistics: node counts per (type, source), edge counts per
(directed type signature, origin), and the stage-log sequence."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .model import KnowledgeGraph, StageLog


@dataclass
class StatsReport:
    node_total: int
    edge_total: int
    nodes_by_type_source: list[dict]
    edges_by_signature_origin: list[dict]
    stages: list[StageLog] = field(default_factory=list)
    wall_time_seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "nodes": {
                "total": self.node_total,
                "by_type_source": self.nodes_by_type_source,
            },
            "edges": {
                "total": self.edge_total,
                "by_signature_origin": self.edges_by_signature_origin,
            },
            "stages": [s.to_dict() for s in self.stages],
            "wall_time_seconds": self.wall_time_seconds,
        }

    def write_json(self, path) -> None:
        with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def compute_stats(g: KnowledgeGraph) -> StatsReport:
    """Breakdown tables with deterministic row order (lexicographic keys);
    totals always equal the sums of their breakdowns."""
    node_counter = Counter((n.entity_type, n.source) for n in g.nodes)
    edge_counter = Counter(
        (f"{t.relation.head_type}:{t.relation.tail_type}", t.relation.origin)
        for t in g.triplets
    )
    nodes = [
        {"type": etype, "source": source, "count": count}
        for (etype, source), count in sorted(node_counter.items())
    ]
    edges = [
        {"signature": signature, "origin": origin, "count": count}
        for (signature, origin), count in sorted(edge_counter.items())
    ]
    return StatsReport(
        node_total=g.node_count(),
        edge_total=len(g),
        nodes_by_type_source=nodes,
        edges_by_signature_origin=edges,
    )

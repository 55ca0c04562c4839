"""Core domain types: entities, relations, triplets, the in-memory graph store,
and the per-stage provenance log.

Entity identity is fully qualified as ``entity_type::source:local_id`` and
relations as ``origin::label::HeadType:TailType``. The graph is an ordered
multiset of triplets: input order is preserved so that first-occurrence
deduplication and all serialized outputs are reproducible.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .errors import StageError

# The 13 node categories accepted by the pipeline.
ENTITY_TYPES: frozenset[str] = frozenset({
    "Anatomy",
    "Atc",
    "BiologicalProcess",
    "CellularComponent",
    "Compound",
    "Disease",
    "Gene",
    "MolecularFunction",
    "Pathway",
    "PharmacologicClass",
    "SideEffect",
    "Symptom",
    "Tax",
})

# Raw exports spell several categories with spaces; map any accepted spelling
# to the canonical name used everywhere downstream.
ENTITY_TYPE_ALIASES: dict[str, str] = {t: t for t in ENTITY_TYPES}
ENTITY_TYPE_ALIASES.update({
    "Biological Process": "BiologicalProcess",
    "Cellular Component": "CellularComponent",
    "Molecular Function": "MolecularFunction",
    "Side Effect": "SideEffect",
    "Pharmacologic Class": "PharmacologicClass",
})

# Node categories collapsed into gene feature vectors, in manifest block order.
ANNOTATION_TYPES: tuple[str, ...] = (
    "Pathway",
    "MolecularFunction",
    "BiologicalProcess",
    "CellularComponent",
)


@dataclass(frozen=True)
class EntityRef:
    """One fully qualified node identity.

    ``text`` caches the rendered ``entity_type::source:local_id`` form; it is
    derived and excluded from equality.
    """

    entity_type: str
    source: str
    local_id: str
    text: str = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "text", f"{self.entity_type}::{self.source}:{self.local_id}"
        )

    def is_clean(self) -> bool:
        """True when local_id satisfies the post-cleaning invariant
        (non-empty, no ';', '|' or tab)."""
        lid = self.local_id
        return bool(lid) and not any(c in lid for c in ";|\t")

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class RelationRef:
    """A relation qualified by origin database and endpoint-type signature.

    ``(origin, label, head_type, tail_type)`` is the harmonization key.
    """

    origin: str
    label: str
    head_type: str
    tail_type: str
    text: str = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "text",
            f"{self.origin}::{self.label}::{self.head_type}:{self.tail_type}",
        )

    def with_label(self, label: str) -> "RelationRef":
        return RelationRef(self.origin, label, self.head_type, self.tail_type)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Triplet:
    """One directed edge. ``origin_line`` is provenance only and never takes
    part in identity; it is dropped at final serialization."""

    head: EntityRef
    relation: RelationRef
    tail: EntityRef
    origin_line: int = field(default=-1, compare=False)

    def signature_ok(self) -> bool:
        return (
            self.head.entity_type == self.relation.head_type
            and self.tail.entity_type == self.relation.tail_type
        )

    def render(self) -> tuple[str, str, str]:
        return (self.head.text, self.relation.text, self.tail.text)


@dataclass
class StageLog:
    """Row accounting for one pipeline stage.

    ``rows_out == rows_in - rows_removed + rows_added`` is enforced at
    construction; ``details`` holds per-defect-class counters.
    """

    stage_name: str
    rows_in: int
    rows_removed: int
    rows_added: int
    rows_out: int
    wall_time: float = 0.0
    details: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.rows_out != self.rows_in - self.rows_removed + self.rows_added:
            raise ValueError(
                f"stage {self.stage_name}: conservation violated "
                f"({self.rows_in} - {self.rows_removed} + {self.rows_added} "
                f"!= {self.rows_out})"
            )

    def to_dict(self) -> dict:
        return {
            "stage": self.stage_name,
            "rows_in": self.rows_in,
            "rows_removed": self.rows_removed,
            "rows_added": self.rows_added,
            "rows_out": self.rows_out,
            "wall_time": self.wall_time,
            "details": dict(sorted(self.details.items())),
        }


class StageTimer:
    """Context helper: stages create one at entry and stamp logs at exit."""

    def __init__(self) -> None:
        self.start = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self.start


class KnowledgeGraph:
    """Ordered multiset of triplets plus a node registry derived from them.

    The registry maps each endpoint to its incidence count, so nodes with no
    remaining edges drop out automatically and the registry always equals the
    set of triplet endpoints.
    """

    __slots__ = ("triplets", "node_degree")

    def __init__(self, triplets: Iterable[Triplet] = ()):
        self.triplets: list[Triplet] = []
        self.node_degree: dict[EntityRef, int] = {}
        for t in triplets:
            self.insert(t)

    @classmethod
    def _from_clean(cls, triplets: list[Triplet]) -> "KnowledgeGraph":
        """Bulk constructor for stage outputs whose rows were already validated."""
        g = cls.__new__(cls)
        g.triplets = triplets
        degree: dict[EntityRef, int] = {}
        for t in triplets:
            degree[t.head] = degree.get(t.head, 0) + 1
            degree[t.tail] = degree.get(t.tail, 0) + 1
        g.node_degree = degree
        return g

    def insert(self, t: Triplet) -> "KnowledgeGraph":
        """Append one triplet, preserving input order. Multiset semantics:
        duplicates are accepted here and handled by the dedup stage."""
        if not t.signature_ok():
            raise StageError(
                f"endpoint/relation type mismatch: ({t.head.entity_type}, "
                f"{t.relation.head_type}:{t.relation.tail_type}, "
                f"{t.tail.entity_type}) for relation {t.relation}"
            )
        self.triplets.append(t)
        self.node_degree[t.head] = self.node_degree.get(t.head, 0) + 1
        self.node_degree[t.tail] = self.node_degree.get(t.tail, 0) + 1
        return self

    def __len__(self) -> int:
        return len(self.triplets)

    def __iter__(self) -> Iterator[Triplet]:
        return iter(self.triplets)

    @property
    def nodes(self) -> Iterable[EntityRef]:
        return self.node_degree.keys()

    def node_count(self) -> int:
        return len(self.node_degree)

    def has_node(self, n: EntityRef) -> bool:
        return n in self.node_degree

    def type_counts(self) -> Counter:
        return Counter(n.entity_type for n in self.node_degree)

    def nodes_of_type(self, entity_type: str) -> list[EntityRef]:
        return [n for n in self.node_degree if n.entity_type == entity_type]

    def relation_labels(self) -> set[str]:
        return {t.relation.label for t in self.triplets}

    def endpoint_pairs(self) -> set[frozenset[str]]:
        """Unordered endpoint-pair index used by duplicate and leakage queries."""
        return {frozenset((t.head.text, t.tail.text)) for t in self.triplets}

    def filter(
        self, keep: Callable[[Triplet], bool]
    ) -> tuple["KnowledgeGraph", int]:
        """New graph with only rows passing ``keep``; returns removed count."""
        kept = [t for t in self.triplets if keep(t)]
        return KnowledgeGraph._from_clean(kept), len(self.triplets) - len(kept)

    def validate(self) -> None:
        """Assert registry consistency: registry == endpoint set and per-type
        counts sum to the node total."""
        seen: dict[EntityRef, int] = {}
        for t in self.triplets:
            seen[t.head] = seen.get(t.head, 0) + 1
            seen[t.tail] = seen.get(t.tail, 0) + 1
        if seen != self.node_degree:
            raise StageError("node registry out of sync with triplet endpoints")
        if sum(self.type_counts().values()) != self.node_count():
            raise StageError("per-type node counts do not sum to node total")


def graph_insert(g: KnowledgeGraph, t: Triplet) -> KnowledgeGraph:
    """Insert ``t`` into ``g`` (mutating); rejects endpoint/signature mismatch."""
    return g.insert(t)


def remove_node(
    g: KnowledgeGraph, n: EntityRef, stage_name: str = "remove_node"
) -> tuple[KnowledgeGraph, StageLog]:
    """Remove ``n`` and every incident triplet. Absent node is a no-op."""
    timer = StageTimer()
    rows_in = len(g)
    present = g.has_node(n)
    g2, removed = g.filter(lambda t: t.head != n and t.tail != n)
    return g2, StageLog(
        stage_name=stage_name,
        rows_in=rows_in,
        rows_removed=removed,
        rows_added=0,
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details={"nodes_removed": int(present)},
    )

"""Format-defect filtering, relation harmonization and non-human pruning.

Each operation is an independently toggleable stage: graph in, graph out,
plus a StageLog with per-defect-class counters.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import ParseError, StageError
from .ingest import parse_entity
from .model import (
    ENTITY_TYPE_ALIASES,
    EntityRef,
    KnowledgeGraph,
    RelationRef,
    StageLog,
    StageTimer,
    Triplet,
)

log = logging.getLogger(__name__)

# Canonical labels introduced by the enrichment stages; harmonization must
# leave them untouched when re-run on an enriched graph.
ENRICHMENT_LABELS = frozenset({"GENE_PATHWAY", "SIDE_EFFECT"})

# Relation labels dropped by the non-human filter when no override is given.
DEFAULT_BANNED_LABELS = frozenset({"VirGenHumGen", "DrugVirGen"})

HUMAN_TAGS = frozenset({"human", "9606", "homo sapiens"})


@dataclass(frozen=True)
class HarmonizationTable:
    """(origin, label, head_type, tail_type) -> canonical relation label.

    Shipped as a versioned data file so corrections never require a rebuild.
    Origin and label are matched case-insensitively; endpoint types are exact.
    """

    mapping: dict[tuple[str, str, str, str], str]
    canonical_labels: frozenset[str]

    @classmethod
    def from_rows(cls, rows: list[tuple[str, str, str, str, str]]) -> "HarmonizationTable":
        mapping: dict[tuple[str, str, str, str], str] = {}
        for origin, label, head_t, tail_t, canonical in rows:
            head = ENTITY_TYPE_ALIASES.get(head_t)
            tail = ENTITY_TYPE_ALIASES.get(tail_t)
            if head is None or tail is None:
                raise ParseError(
                    f"harmonization row ({origin}, {label}): unknown endpoint "
                    f"type {head_t!r} or {tail_t!r}"
                )
            key = (origin.casefold(), label.casefold(), head, tail)
            if key in mapping and mapping[key] != canonical:
                raise ParseError(
                    f"harmonization key {key} maps to both "
                    f"{mapping[key]!r} and {canonical!r}"
                )
            mapping[key] = canonical
        canon = frozenset(mapping.values()) | ENRICHMENT_LABELS
        return cls(mapping, canon)

    @classmethod
    def from_file(cls, path: str | Path) -> "HarmonizationTable":
        rows = []
        with Path(path).open("r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if cols == ["origin", "label", "head_type", "tail_type", "canonical_label"]:
                    continue
                if len(cols) != 5:
                    raise ParseError(
                        f"harmonization file {path}: expected 5 columns, got {len(cols)}",
                        line=line_no,
                    )
                rows.append(tuple(cols))
        return cls.from_rows(rows)

    @classmethod
    def builtin(cls) -> "HarmonizationTable":
        ref = resources.files("kgprep").joinpath("data/harmonization.tsv")
        with resources.as_file(ref) as path:
            return cls.from_file(path)

    @classmethod
    def empty(cls) -> "HarmonizationTable":
        return cls({}, ENRICHMENT_LABELS)

    def lookup(self, relation: RelationRef) -> str | None:
        return self.mapping.get(
            (
                relation.origin.casefold(),
                relation.label.casefold(),
                relation.head_type,
                relation.tail_type,
            )
        )

    def canon_label(self, relation: RelationRef):
        """Canonical form used for equality: the mapped label when the key is
        known, otherwise the (origin, label) pair itself. With an empty table
        this degenerates to raw-relation identity."""
        if relation.label in self.canonical_labels:
            return ("label", relation.label)
        mapped = self.lookup(relation)
        if mapped is not None:
            return ("label", mapped)
        return ("raw", relation.origin, relation.label)


def filter_malformed(g: KnowledgeGraph) -> tuple[KnowledgeGraph, StageLog]:
    """Drop every triplet whose head or tail text contains ';' or '|'.

    Only endpoint fields are inspected; such characters mark entities that
    were erroneously merged into a single node upstream.
    """
    timer = StageTimer()
    kept: list[Triplet] = []
    semicolons = 0
    pipes = 0
    for t in g.triplets:
        endpoint_text = t.head.text + t.tail.text
        if ";" in endpoint_text:
            semicolons += 1
        elif "|" in endpoint_text:
            pipes += 1
        else:
            kept.append(t)
    g2 = KnowledgeGraph._from_clean(kept)
    return g2, StageLog(
        stage_name="filter_malformed",
        rows_in=len(g),
        rows_removed=semicolons + pipes,
        rows_added=0,
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details={"semicolon_rows": semicolons, "pipe_rows": pipes},
    )


def harmonize(
    g: KnowledgeGraph, table: HarmonizationTable, strict: bool = False
) -> tuple[KnowledgeGraph, StageLog]:
    """Replace each relation label with its canonical label.

    Already-canonical labels pass through, which makes the operation
    idempotent. Unknown keys pass through with a warning in lenient mode and
    are fatal in strict mode.
    """
    timer = StageTimer()
    out: list[Triplet] = []
    rewritten = 0
    unknown = 0
    # (replacement or None, counts-as-unmapped) memoized per distinct relation
    cache: dict[RelationRef, tuple[RelationRef | None, bool]] = {}
    for t in g.triplets:
        rel = t.relation
        hit = cache.get(rel)
        if hit is None:
            if rel.label in table.canonical_labels:
                hit = (None, False)
            else:
                mapped = table.lookup(rel)
                if mapped is not None:
                    hit = (rel.with_label(mapped), False)
                elif strict:
                    raise StageError(
                        "harmonize: no canonical label for "
                        f"({rel.origin}, {rel.label}, {rel.head_type}, "
                        f"{rel.tail_type}) in strict mode"
                    )
                else:
                    log.warning("harmonize: passing through unmapped relation %s", rel)
                    hit = (None, True)
            cache[rel] = hit
        new_rel, is_unmapped = hit
        if is_unmapped:
            unknown += 1
        if new_rel is None:
            out.append(t)
        else:
            rewritten += 1
            out.append(Triplet(t.head, new_rel, t.tail, t.origin_line))
    g2 = KnowledgeGraph._from_clean(out)
    return g2, StageLog(
        stage_name="harmonize",
        rows_in=len(g),
        rows_removed=0,
        rows_added=0,
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details={"labels_rewritten": rewritten, "unmapped_rows": unknown},
    )


@dataclass(frozen=True)
class NonHumanSpec:
    """What the non-human filter removes: a closed, configurable list of
    banned relation labels, plus any Vir-prefixed label when enabled."""

    banned_labels: frozenset[str] = DEFAULT_BANNED_LABELS
    ban_vir_prefix: bool = True

    def is_banned(self, label: str) -> bool:
        return label in self.banned_labels or (
            self.ban_vir_prefix and label.startswith("Vir")
        )


def remove_nonhuman(
    g: KnowledgeGraph,
    spec: NonHumanSpec | None = None,
    taxonomy: dict[str, str] | None = None,
) -> tuple[KnowledgeGraph, StageLog]:
    """Remove banned-relation rows, then every non-human gene node with its
    incident rows. Genes absent from the taxonomy table default to human, so
    missing evidence never deletes anything.
    """
    timer = StageTimer()
    spec = spec or NonHumanSpec()
    taxonomy = taxonomy or {}
    rows_in = len(g)

    survivors: list[Triplet] = []
    banned_rows = 0
    for t in g.triplets:
        if spec.is_banned(t.relation.label):
            banned_rows += 1
        else:
            survivors.append(t)

    nonhuman: set[EntityRef] = set()
    if taxonomy:
        tags = {}
        for gene_text, tag in taxonomy.items():
            tags[parse_entity(gene_text)] = tag.casefold()
        for t in survivors:
            for node in (t.head, t.tail):
                if node.entity_type == "Gene":
                    tag = tags.get(node)
                    if tag is not None and tag not in HUMAN_TAGS:
                        nonhuman.add(node)

    gene_rows = 0
    kept: list[Triplet] = []
    for t in survivors:
        if t.head in nonhuman or t.tail in nonhuman:
            gene_rows += 1
        else:
            kept.append(t)

    g2 = KnowledgeGraph._from_clean(kept)
    return g2, StageLog(
        stage_name="remove_nonhuman",
        rows_in=rows_in,
        rows_removed=banned_rows + gene_rows,
        rows_added=0,
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details={
            "banned_relation_rows": banned_rows,
            "nonhuman_gene_rows": gene_rows,
            "nonhuman_genes_removed": len(nonhuman),
        },
    )


DEFAULT_DROP_TYPES = ("Tax", "Symptom", "Pathway")


def drop_entity_types(
    g: KnowledgeGraph, types=DEFAULT_DROP_TYPES
) -> tuple[KnowledgeGraph, StageLog]:
    """Remove every node of the listed categories along with incident rows.
    Pathways dropped here are re-integrated by the enrichment stage."""
    timer = StageTimer()
    doomed = frozenset(types)
    node_count = sum(1 for n in g.nodes if n.entity_type in doomed)
    g2, removed = g.filter(
        lambda t: t.head.entity_type not in doomed and t.tail.entity_type not in doomed
    )
    details = {"nodes_removed": node_count}
    for etype in sorted(doomed):
        details[f"nodes_removed_{etype}"] = sum(
            1 for n in g.nodes if n.entity_type == etype
        )
    return g2, StageLog(
        stage_name="drop_types",
        rows_in=len(g),
        rows_removed=removed,
        rows_added=0,
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details=details,
    )

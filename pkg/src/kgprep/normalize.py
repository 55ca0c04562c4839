"""Entity-identifier standardization and duplicate removal.

Cross-reference tables are resolved to a fixed point (no chains, no cycles)
before any rewriting, so remapping is idempotent. Deduplication keys each
triplet on its canonical label and its lexicographically ordered endpoint
pair, which removes exact duplicates and head/tail-reversed duplicates in a
single pass; the first occurrence in input order survives.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import InputError, StageError
from .ingest import load_xref, parse_entity
from .model import EntityRef, KnowledgeGraph, StageLog, StageTimer, Triplet

log = logging.getLogger(__name__)

# Canonical-source preference for compound identifiers, best first. Raw xref
# rows are oriented so mapping always moves toward the better source.
COMPOUND_SOURCE_PREFERENCE = (
    "PubChem_Compounds",
    "CHEMBL",
    "CHEBI",
    "drugbank",
    "molport",
    "zinc",
)


def _preference_rank(source: str, preference: tuple[str, ...]) -> int:
    try:
        return preference.index(source)
    except ValueError:
        return len(preference)


@dataclass
class IdMapTable:
    """Redundant-id to canonical-id mapping for one entity category."""

    entity_type: str
    mapping: dict[EntityRef, EntityRef]
    resolved: bool = False

    @classmethod
    def empty(cls, entity_type: str) -> "IdMapTable":
        return cls(entity_type, {}, resolved=True)

    @classmethod
    def from_pairs(
        cls,
        entity_type: str,
        pairs,
        preference: tuple[str, ...] | None = None,
    ) -> "IdMapTable":
        """Build a raw table from (from_ref, to_ref) pairs.

        Both sides must share ``entity_type``. With a source-preference order,
        each pair is oriented so the target is the strictly preferred side.
        """
        mapping: dict[EntityRef, EntityRef] = {}
        for src, dst in pairs:
            for ref in (src, dst):
                if ref.entity_type != entity_type:
                    raise InputError(
                        f"id map for {entity_type}: {ref.text} has type "
                        f"{ref.entity_type}"
                    )
            if src == dst:
                continue
            if preference is not None:
                if _preference_rank(dst.source, preference) > _preference_rank(
                    src.source, preference
                ):
                    src, dst = dst, src
            if src in mapping and mapping[src] != dst:
                log.warning(
                    "id map %s: duplicate key %s (%s replaces %s)",
                    entity_type, src.text, dst.text, mapping[src].text,
                )
            mapping[src] = dst
        return cls(entity_type, mapping, resolved=False)

    @classmethod
    def from_file(
        cls,
        path,
        entity_type: str,
        preference: tuple[str, ...] | None = None,
    ) -> "IdMapTable":
        raw = load_xref(path)
        pairs = [(parse_entity(k), parse_entity(v)) for k, v in raw.items()]
        return cls.from_pairs(entity_type, pairs, preference)

    def apply(self, ref: EntityRef) -> EntityRef:
        return self.mapping.get(ref, ref)


def resolve_fixed_point(table: IdMapTable) -> IdMapTable:
    """Collapse mapping chains (a->b, b->c becomes a->c, b->c).

    A cycle has no fixed point and is fatal; the error names its members.
    """
    resolved: dict[EntityRef, EntityRef] = {}
    # identity entries are already at fixed point; drop rather than chase them
    mapping = {k: v for k, v in table.mapping.items() if k != v}
    for start in mapping:
        if start in resolved:
            continue
        chain = [start]
        seen = {start}
        node = start
        while node in mapping:
            node = mapping[node]
            if node in resolved:
                node = resolved[node]
                break
            if node in seen:
                cycle = chain[chain.index(node):] + [node]
                raise InputError(
                    f"id map for {table.entity_type}: cycle "
                    + " -> ".join(r.text for r in cycle)
                )
            seen.add(node)
            chain.append(node)
        terminal = node
        for member in chain:
            if member in mapping:
                resolved[member] = terminal
    return IdMapTable(table.entity_type, resolved, resolved=True)


def remap_entities(
    g: KnowledgeGraph,
    compounds: IdMapTable,
    diseases: IdMapTable,
    genes: IdMapTable,
) -> tuple[KnowledgeGraph, StageLog]:
    """Rewrite every endpoint through its category's fixed-point table.

    Ids absent from every table pass through unchanged; that is exactly how
    source-only identifiers with no cross-reference survive. The log counts,
    per category, the distinct redundant ids actually seen in the graph.
    """
    timer = StageTimer()
    tables = {"Compound": compounds, "Disease": diseases, "Gene": genes}
    for table in tables.values():
        if not table.resolved:
            raise StageError("remap_entities: id map not resolved to fixed point")

    merged: dict[str, set[EntityRef]] = {k: set() for k in tables}
    rewritten_slots = 0

    def rewrite(ref: EntityRef) -> EntityRef:
        nonlocal rewritten_slots
        table = tables.get(ref.entity_type)
        if table is None:
            return ref
        target = table.mapping.get(ref)
        if target is None:
            return ref
        merged[ref.entity_type].add(ref)
        rewritten_slots += 1
        return target

    out = [
        Triplet(rewrite(t.head), t.relation, rewrite(t.tail), t.origin_line)
        for t in g.triplets
    ]
    g2 = KnowledgeGraph._from_clean(out)
    return g2, StageLog(
        stage_name="remap",
        rows_in=len(g),
        rows_removed=0,
        rows_added=0,
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details={
            "compound_ids_merged": len(merged["Compound"]),
            "disease_ids_merged": len(merged["Disease"]),
            "gene_ids_merged": len(merged["Gene"]),
            "endpoints_rewritten": rewritten_slots,
        },
    )


def canonical_key(t: Triplet, same_type_only: bool = False) -> tuple[str, str, str]:
    """Duplicate-detection key: canonical label plus the endpoint pair in
    lexicographic order. With ``same_type_only``, reversed-pair folding is
    restricted to same-type endpoints (for sensitivity analysis)."""
    h, tl = t.head.text, t.tail.text
    if same_type_only and t.head.entity_type != t.tail.entity_type:
        return (h, t.relation.label, tl)
    if tl < h:
        h, tl = tl, h
    return (h, t.relation.label, tl)


def deduplicate(
    g: KnowledgeGraph, same_type_only: bool = False
) -> tuple[KnowledgeGraph, StageLog]:
    """Remove exact and reversed-order duplicates; first occurrence survives.

    Must run after remapping so keys compare canonical ids. Exact and
    reversed duplicates are counted separately.
    """
    timer = StageTimer()
    seen: dict[tuple[str, str, str], tuple[str, str]] = {}
    kept: list[Triplet] = []
    exact = 0
    reverse = 0
    for t in g.triplets:
        key = canonical_key(t, same_type_only)
        first = seen.get(key)
        if first is None:
            seen[key] = (t.head.text, t.tail.text)
            kept.append(t)
        elif first == (t.head.text, t.tail.text):
            exact += 1
        else:
            reverse += 1
    g2 = KnowledgeGraph._from_clean(kept)
    return g2, StageLog(
        stage_name="dedup",
        rows_in=len(g),
        rows_removed=exact + reverse,
        rows_added=0,
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details={"exact_duplicates": exact, "reversed_duplicates": reverse},
    )

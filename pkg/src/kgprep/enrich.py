"""Graph enrichment: pathway re-integration, drug/side-effect edges, and
removal of compounds without usable structure strings.

Merges only ever attach to endpoints already present in the graph, so no
orphan subgraphs appear, and they never create a duplicate canonical key.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

from .chem.smiles import parse_smiles
from .errors import SmilesError
from .ingest import parse_entity
from .model import EntityRef, KnowledgeGraph, RelationRef, StageLog, StageTimer, Triplet
from .normalize import IdMapTable, canonical_key

log = logging.getLogger(__name__)

GENE_PATHWAY = RelationRef("Reactome", "GENE_PATHWAY", "Gene", "Pathway")
SIDE_EFFECT = RelationRef("OnSIDES", "SIDE_EFFECT", "Compound", "SideEffect")

TIER_RANK = {"low": 0, "medium": 1, "high": 2}


@dataclass
class EnrichmentBatch:
    """What one merge intends to add, plus per-reason skip counts."""

    new_nodes: set[EntityRef] = field(default_factory=set)
    new_triplets: list[Triplet] = field(default_factory=list)
    skipped: Counter = field(default_factory=Counter)


def merge_reactome(
    g: KnowledgeGraph, table: list[tuple[str, str]]
) -> tuple[KnowledgeGraph, StageLog]:
    """Add gene-to-pathway edges for genes already in the graph.

    Pathway nodes are created on first reference, only ever for present
    genes, so every added pathway has degree >= 1. Rows whose gene is absent,
    or that would duplicate an existing canonical key, are skipped and
    counted.
    """
    timer = StageTimer()
    batch = EnrichmentBatch()
    keys = {canonical_key(t) for t in g.triplets}
    g2 = KnowledgeGraph._from_clean(list(g.triplets))
    for row_no, (gene_text, pathway_text) in enumerate(table, start=1):
        gene = parse_entity(gene_text)
        pathway = parse_entity(pathway_text)
        if not g2.has_node(gene):
            batch.skipped["endpoint_absent"] += 1
            continue
        t = Triplet(gene, GENE_PATHWAY, pathway, origin_line=row_no)
        key = canonical_key(t)
        if key in keys:
            batch.skipped["duplicate"] += 1
            continue
        keys.add(key)
        if not g2.has_node(pathway):
            batch.new_nodes.add(pathway)
        g2.insert(t)
        batch.new_triplets.append(t)
    return g2, StageLog(
        stage_name="reactome",
        rows_in=len(g),
        rows_removed=0,
        rows_added=len(batch.new_triplets),
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details={
            "edges_added": len(batch.new_triplets),
            "pathway_nodes_added": len(batch.new_nodes),
            "skipped_endpoint_absent": batch.skipped["endpoint_absent"],
            "skipped_duplicate": batch.skipped["duplicate"],
        },
    )


def merge_onsides(
    g: KnowledgeGraph,
    table: list[tuple[str, str, str]],
    min_tier: str = "high",
    compound_map: IdMapTable | None = None,
    side_effect_map: IdMapTable | None = None,
) -> tuple[KnowledgeGraph, StageLog]:
    """Add compound/side-effect edges at or above the confidence threshold.

    Compound and side-effect ids are rewritten through the standardization
    tables before matching. Rows for compounds not in the graph are skipped,
    and rows whose endpoint pair already carries any edge (whatever its label
    or orientation) are suppressed as duplicates.
    """
    timer = StageTimer()
    if min_tier not in TIER_RANK:
        raise ValueError(f"unknown confidence tier {min_tier!r}")
    threshold = TIER_RANK[min_tier]
    batch = EnrichmentBatch()
    pairs = g.endpoint_pairs()
    g2 = KnowledgeGraph._from_clean(list(g.triplets))
    for row_no, (compound_text, se_text, tier) in enumerate(table, start=1):
        if TIER_RANK[tier] < threshold:
            batch.skipped["below_confidence"] += 1
            continue
        compound = parse_entity(compound_text)
        side_effect = parse_entity(se_text)
        if compound_map is not None:
            compound = compound_map.apply(compound)
        if side_effect_map is not None:
            side_effect = side_effect_map.apply(side_effect)
        if not g2.has_node(compound):
            batch.skipped["endpoint_absent"] += 1
            continue
        pair = frozenset((compound.text, side_effect.text))
        if pair in pairs:
            batch.skipped["duplicate"] += 1
            continue
        pairs.add(pair)
        t = Triplet(compound, SIDE_EFFECT, side_effect, origin_line=row_no)
        if not g2.has_node(side_effect):
            batch.new_nodes.add(side_effect)
        g2.insert(t)
        batch.new_triplets.append(t)
    return g2, StageLog(
        stage_name="onsides",
        rows_in=len(g),
        rows_removed=0,
        rows_added=len(batch.new_triplets),
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details={
            "edges_added": len(batch.new_triplets),
            "side_effect_nodes_added": len(batch.new_nodes),
            "skipped_below_confidence": batch.skipped["below_confidence"],
            "skipped_endpoint_absent": batch.skipped["endpoint_absent"],
            "skipped_duplicate": batch.skipped["duplicate"],
        },
    )


def filter_no_smiles(
    g: KnowledgeGraph, smiles_dict: dict[str, str]
) -> tuple[KnowledgeGraph, StageLog]:
    """Remove every compound lacking a dictionary entry or whose structure
    string fails to parse, together with all incident rows. Missing and
    unparseable removals are counted separately; downstream fingerprinting
    requires a parseable structure either way."""
    timer = StageTimer()
    missing = 0
    unparseable = 0
    doomed: set[EntityRef] = set()
    for node in g.nodes:
        if node.entity_type != "Compound":
            continue
        smiles = smiles_dict.get(node.text)
        if smiles is None:
            missing += 1
            doomed.add(node)
            continue
        try:
            parse_smiles(smiles)
        except SmilesError as exc:
            log.debug("unparseable SMILES for %s: %s", node.text, exc)
            unparseable += 1
            doomed.add(node)
    g2, removed = g.filter(lambda t: t.head not in doomed and t.tail not in doomed)
    return g2, StageLog(
        stage_name="smiles_filter",
        rows_in=len(g),
        rows_removed=removed,
        rows_added=0,
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details={
            "compounds_missing": missing,
            "compounds_unparseable": unparseable,
            "compounds_removed": len(doomed),
            "edges_removed": removed,
        },
    )

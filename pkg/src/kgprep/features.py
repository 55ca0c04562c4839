"""Gene functional feature vectors built by collapsing star-shaped
annotation subgraphs into sparse one-hot encodings.

Annotation nodes (pathways and the three gene-ontology branches) connect
only to genes; each gene's vector sets one bit per adjacent annotation node,
positioned by a deterministic manifest: category blocks in fixed order,
ids sorted lexicographically within each block. The collapse is lossless:
the bipartite gene/annotation edge set is exactly recoverable from the
manifest plus the vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import StageError
from .model import (
    ANNOTATION_TYPES,
    EntityRef,
    KnowledgeGraph,
    StageLog,
    StageTimer,
)


@dataclass(frozen=True)
class FeatureManifest:
    """Ordered dimension layout: one block per annotation category."""

    blocks: tuple[tuple[str, tuple[EntityRef, ...]], ...]

    @property
    def total_dim(self) -> int:
        return sum(len(ids) for _, ids in self.blocks)

    def block_sizes(self) -> dict[str, int]:
        return {category: len(ids) for category, ids in self.blocks}

    def index_of(self) -> dict[EntityRef, int]:
        table: dict[EntityRef, int] = {}
        offset = 0
        for _, ids in self.blocks:
            for i, ref in enumerate(ids):
                table[ref] = offset + i
            offset += len(ids)
        return table

    def entities(self) -> list[EntityRef]:
        out: list[EntityRef] = []
        for _, ids in self.blocks:
            out.extend(ids)
        return out


@dataclass(frozen=True)
class SparseFeatureVector:
    """Strictly increasing set-bit indices over a fixed dimension."""

    dim: int
    set_indices: tuple[int, ...]

    def __post_init__(self) -> None:
        prev = -1
        for idx in self.set_indices:
            if idx <= prev or idx >= self.dim:
                raise ValueError("indices must be strictly increasing and < dim")
            prev = idx


def build_manifest(g: KnowledgeGraph) -> FeatureManifest:
    """Enumerate every annotation node by category, deterministically:
    category blocks in fixed order, lexicographic ids within each."""
    blocks = []
    for category in ANNOTATION_TYPES:
        ids = tuple(sorted(g.nodes_of_type(category), key=lambda n: n.text))
        blocks.append((category, ids))
    return FeatureManifest(tuple(blocks))


def collapse_to_features(
    g: KnowledgeGraph, manifest: FeatureManifest
) -> tuple[KnowledgeGraph, dict[EntityRef, SparseFeatureVector], StageLog]:
    """Turn gene/annotation adjacency into per-gene vectors and strip the
    annotation nodes and their edges from the graph.

    Every gene present before the collapse gets a vector; genes with no
    annotations get the zero vector. An annotation node adjacent to a
    non-gene violates the star-shape premise and is fatal. Parallel edges to
    the same annotation node collapse onto a single bit.
    """
    timer = StageTimer()
    positions = manifest.index_of()
    annotation_types = frozenset(ANNOTATION_TYPES)
    dim = manifest.total_dim

    gene_bits: dict[EntityRef, set[int]] = {
        n: set() for n in g.nodes if n.entity_type == "Gene"
    }
    kept = []
    edges_removed = 0
    for t in g.triplets:
        head_is_ann = t.head.entity_type in annotation_types
        tail_is_ann = t.tail.entity_type in annotation_types
        if not head_is_ann and not tail_is_ann:
            kept.append(t)
            continue
        annotation, other = (t.head, t.tail) if head_is_ann else (t.tail, t.head)
        if head_is_ann and tail_is_ann:
            raise StageError(
                f"features: annotation-to-annotation edge {t.head.text} -> {t.tail.text}"
            )
        if other.entity_type != "Gene":
            raise StageError(
                f"features: annotation node {annotation.text} adjacent to "
                f"non-gene {other.text}"
            )
        position = positions.get(annotation)
        if position is None:
            raise StageError(
                f"features: {annotation.text} missing from manifest; "
                "manifest must be built from the same graph"
            )
        gene_bits[other].add(position)
        edges_removed += 1

    table = {
        gene: SparseFeatureVector(dim, tuple(sorted(bits)))
        for gene, bits in gene_bits.items()
    }
    g2 = KnowledgeGraph._from_clean(kept)
    return g2, table, StageLog(
        stage_name="features",
        rows_in=len(g),
        rows_removed=edges_removed,
        rows_added=0,
        rows_out=len(g2),
        wall_time=timer.elapsed(),
        details={
            "annotation_nodes_removed": len(positions),
            "feature_dim": dim,
            "genes_with_features": sum(1 for v in table.values() if v.set_indices),
            "genes_total": len(table),
        },
    )


def reconstruct_edges(
    manifest: FeatureManifest, table: dict[EntityRef, SparseFeatureVector]
) -> set[tuple[str, str]]:
    """Invert the collapse: the (gene, annotation) pair set encoded by the
    vectors. Used to check round-trip losslessness."""
    entities = manifest.entities()
    pairs = set()
    for gene, vector in table.items():
        for idx in vector.set_indices:
            pairs.add((gene.text, entities[idx].text))
    return pairs


def write_manifest(path, manifest: FeatureManifest) -> None:
    """TSV: index, category, entity_id."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        idx = 0
        for category, ids in manifest.blocks:
            for ref in ids:
                fh.write(f"{idx}\t{category}\t{ref.text}\n")
                idx += 1


def write_features(path, table: dict[EntityRef, SparseFeatureVector]) -> None:
    """TSV: gene_id, comma-separated set indices (empty column for the zero
    vector). Rows sorted by gene id."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for gene in sorted(table, key=lambda n: n.text):
            indices = ",".join(str(i) for i in table[gene].set_indices)
            fh.write(f"{gene.text}\t{indices}\n")

"""Streaming parsers for triplet TSVs and the auxiliary data files.

All parsers are pure; entity and relation parsing is memoized per input text,
which matters when the same identifiers repeat across millions of rows.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .errors import InputError, ParseError, StageError
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

# Default database-origin tag per node category, applied when the raw
# identifier omits the source segment. Compound and Disease defer to
# id-pattern rules below.
SOURCE_DEFAULTS: dict[str, str] = {
    "Anatomy": "UBERON",
    "Atc": "drugbank",
    "BiologicalProcess": "GO",
    "CellularComponent": "GO",
    "Gene": "NCBI",
    "MolecularFunction": "GO",
    "Pathway": "Reactome",
    "PharmacologicClass": "ndfrt",
    "SideEffect": "umls",
    "Symptom": "MESH",
    "Tax": "NCBI",
}

_COMPOUND_ID_RULES: tuple[tuple[re.Pattern, str], ...] = (
    (re.compile(r"^DB\d"), "drugbank"),
    (re.compile(r"^\d+$"), "PubChem_Compounds"),
    (re.compile(r"^CHEMBL", re.IGNORECASE), "CHEMBL"),
    (re.compile(r"^CHEBI", re.IGNORECASE), "CHEBI"),
    (re.compile(r"^ZINC", re.IGNORECASE), "zinc"),
    (re.compile(r"^MolPort", re.IGNORECASE), "molport"),
)

_DISEASE_ID_RULES: tuple[tuple[re.Pattern, str], ...] = (
    (re.compile(r"^DOID", re.IGNORECASE), "DOID"),
    (re.compile(r"^\d+$"), "OMIM"),
    (re.compile(r"^[CD]\d+$"), "MESH"),
)

UNKNOWN_SOURCE = "unknown"


def infer_source(entity_type: str, local_id: str) -> str:
    """Deterministic source inference for identifiers lacking a source tag."""
    if entity_type == "Compound":
        for pattern, source in _COMPOUND_ID_RULES:
            if pattern.match(local_id):
                return source
        return UNKNOWN_SOURCE
    if entity_type == "Disease":
        for pattern, source in _DISEASE_ID_RULES:
            if pattern.match(local_id):
                return source
        return UNKNOWN_SOURCE
    return SOURCE_DEFAULTS.get(entity_type, UNKNOWN_SOURCE)


@lru_cache(maxsize=None)
def _parse_entity_default(text: str) -> EntityRef:
    head, sep, rest = text.partition("::")
    if not sep:
        raise ParseError(f"entity {text!r}: missing '::' type separator")
    entity_type = ENTITY_TYPE_ALIASES.get(head.strip())
    if entity_type is None:
        raise ParseError(f"entity {text!r}: unknown entity type {head!r}")
    source, sep, local_id = rest.partition(":")
    if not sep:
        # no source segment; infer it from the category and id pattern
        local_id = source
        source = infer_source(entity_type, local_id)
    if not local_id:
        raise ParseError(f"entity {text!r}: empty identifier")
    if not source:
        raise ParseError(f"entity {text!r}: empty source segment")
    return EntityRef(entity_type, source, local_id)


def parse_entity(text: str) -> EntityRef:
    """Parse ``entity_type::source:local_id`` (source inferred when absent).

    Identifiers containing ';' or '|' are accepted here; removing them is the
    format-filter stage's job.
    """
    if not text:
        raise ParseError("empty entity text")
    return _parse_entity_default(text)


@lru_cache(maxsize=None)
def parse_relation(text: str) -> RelationRef:
    """Parse ``origin::label::HeadType:TailType`` into a RelationRef."""
    parts = text.split("::")
    if len(parts) < 3:
        raise ParseError(f"relation {text!r}: expected origin::label::Head:Tail")
    origin = parts[0]
    signature = parts[-1]
    label = "::".join(parts[1:-1])
    if not origin or not label:
        raise ParseError(f"relation {text!r}: empty origin or label")
    head_txt, sep, tail_txt = signature.partition(":")
    if not sep:
        raise ParseError(f"relation {text!r}: malformed type signature {signature!r}")
    head_type = ENTITY_TYPE_ALIASES.get(head_txt.strip())
    tail_type = ENTITY_TYPE_ALIASES.get(tail_txt.strip())
    if head_type is None or tail_type is None:
        raise ParseError(f"relation {text!r}: unknown endpoint type in {signature!r}")
    return RelationRef(origin, label, head_type, tail_type)


def _is_header(columns: list[str]) -> bool:
    """First line is a header only when entity parsing fails on every column."""
    for col in columns:
        try:
            parse_entity(col)
            return False
        except ParseError:
            continue
    return True


def load_triplets(path: str | Path) -> tuple[KnowledgeGraph, StageLog]:
    """Load a 3-column triplet TSV into a graph.

    Malformed lines are skipped, never silently: the stage log details count
    every skip by reason and ``loaded + skipped == physical lines - header``.
    """
    timer = StageTimer()
    path = Path(path)
    triplets: list[Triplet] = []
    skipped = {
        "bad_columns": 0,
        "bad_entity": 0,
        "bad_relation": 0,
        "signature_mismatch": 0,
        "blank": 0,
    }
    physical = 0
    header = 0
    try:
        fh = path.open("r", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read triplet file {path}: {exc}") from exc
    with fh:
        for line_no, line in enumerate(fh, start=1):
            physical += 1
            line = line.rstrip("\n")
            if line.endswith("\r"):
                line = line[:-1]
            if not line.strip():
                skipped["blank"] += 1
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                skipped["bad_columns"] += 1
                log.debug("%s:%d: %d columns, expected 3", path, line_no, len(cols))
                continue
            if line_no == 1 and _is_header(cols):
                header = 1
                continue
            try:
                head = parse_entity(cols[0])
                tail = parse_entity(cols[2])
            except ParseError as exc:
                skipped["bad_entity"] += 1
                log.debug("%s:%d: %s", path, line_no, exc)
                continue
            try:
                rel = parse_relation(cols[1])
            except ParseError as exc:
                skipped["bad_relation"] += 1
                log.debug("%s:%d: %s", path, line_no, exc)
                continue
            t = Triplet(head, rel, tail, origin_line=line_no)
            if not t.signature_ok():
                skipped["signature_mismatch"] += 1
                log.debug(
                    "%s:%d: endpoint types (%s, %s) do not match relation %s",
                    path, line_no, head.entity_type, tail.entity_type, rel,
                )
                continue
            triplets.append(t)

    g = KnowledgeGraph._from_clean(triplets)
    n_skipped = sum(skipped.values())
    details = {f"skipped_{k}": v for k, v in skipped.items()}
    details["physical_lines"] = physical
    details["header_lines"] = header
    return g, StageLog(
        stage_name="ingest",
        rows_in=physical - header,
        rows_removed=n_skipped,
        rows_added=0,
        rows_out=len(g),
        wall_time=timer.elapsed(),
        details=details,
    )


@dataclass(frozen=True)
class TableSchema:
    """Declared shape of an auxiliary input file."""

    name: str
    columns: tuple[str, ...]
    multivalued: bool = False
    # column index -> allowed values (checked case-sensitively)
    allowed: dict[int, frozenset[str]] = field(default_factory=dict)


XREF_SCHEMA = TableSchema("xref", ("from_id", "to_id"))
TAXONOMY_SCHEMA = TableSchema("taxonomy", ("gene_id", "species_tag"))
SMILES_SCHEMA = TableSchema("smiles", ("compound_id", "smiles"))
REACTOME_SCHEMA = TableSchema("reactome", ("gene_id", "pathway_id"), multivalued=True)
ONSIDES_SCHEMA = TableSchema(
    "onsides",
    ("compound_id", "side_effect_id", "confidence_tier"),
    multivalued=True,
    allowed={2: frozenset({"high", "medium", "low"})},
)


def read_rows(path: str | Path, schema: TableSchema) -> list[tuple[str, ...]]:
    """Read and validate the rows of a declared-schema TSV. Schema violations
    are fatal with the offending line number."""
    path = Path(path)
    n = len(schema.columns)
    rows: list[tuple[str, ...]] = []
    try:
        fh = path.open("r", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {schema.name} file {path}: {exc}") from exc
    with fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if line.endswith("\r"):
                line = line[:-1]
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != n:
                raise ParseError(
                    f"{schema.name} file {path}: expected {n} columns, got {len(cols)}",
                    line=line_no,
                )
            if line_no == 1 and cols == list(schema.columns):
                continue  # optional literal header, checked before value validation
            for idx, allowed in schema.allowed.items():
                if cols[idx] not in allowed:
                    raise ParseError(
                        f"{schema.name} file {path}: {schema.columns[idx]} "
                        f"{cols[idx]!r} not in {sorted(allowed)}",
                        line=line_no,
                    )
            rows.append(tuple(cols))
    return rows


def load_table(path: str | Path, schema: TableSchema):
    """Load a keyed table per its schema.

    Single-valued schemas return ``dict[key, value]`` with a last-wins-and-warn
    duplicate policy; multivalued schemas return ``dict[key, list[values]]``
    preserving row order (exact duplicate rows collapse with a warning).
    """
    rows = read_rows(path, schema)
    if not schema.multivalued:
        table: dict[str, str] = {}
        for row in rows:
            key, value = row[0], row[1]
            if key in table and table[key] != value:
                log.warning(
                    "%s: duplicate key %r (%r replaces %r)",
                    schema.name, key, value, table[key],
                )
            table[key] = value
        return table
    multi: dict[str, list] = {}
    seen: set[tuple[str, ...]] = set()
    for row in rows:
        if row in seen:
            log.warning("%s: duplicate row %r collapsed", schema.name, row)
            continue
        seen.add(row)
        key = row[0]
        value = row[1] if len(row) == 2 else tuple(row[1:])
        multi.setdefault(key, []).append(value)
    return multi


def load_xref(path: str | Path) -> dict[str, str]:
    return load_table(path, XREF_SCHEMA)


def load_taxonomy(path: str | Path) -> dict[str, str]:
    return load_table(path, TAXONOMY_SCHEMA)


def load_smiles_dict(path: str | Path) -> dict[str, str]:
    return load_table(path, SMILES_SCHEMA)


def load_reactome(path: str | Path) -> list[tuple[str, str]]:
    """Gene-to-pathway rows in file order (merge semantics need ordering)."""
    rows = read_rows(path, REACTOME_SCHEMA)
    out: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for gene, pathway in rows:
        if (gene, pathway) in seen:
            log.warning("reactome: duplicate row (%s, %s) collapsed", gene, pathway)
            continue
        seen.add((gene, pathway))
        out.append((gene, pathway))
    return out


def load_onsides(path: str | Path) -> list[tuple[str, str, str]]:
    """Compound/side-effect/tier rows in file order."""
    return [tuple(r) for r in read_rows(path, ONSIDES_SCHEMA)]


def write_triplets(
    path: str | Path, g: KnowledgeGraph, preserve_order: bool = False
) -> None:
    """Serialize a graph as triplet TSV. Rows are sorted by rendered
    (head, relation, tail) unless input order is requested."""
    rendered = [t.render() for t in g.triplets]
    if not preserve_order:
        rendered.sort()
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for h, r, t in rendered:
            fh.write(f"{h}\t{r}\t{t}\n")


def graph_from_rows(
    rows: list[tuple[str, str, str]], stage_name: str = "ingest"
) -> KnowledgeGraph:
    """Build a graph from already-split row texts (used by tests and tools)."""
    triplets = []
    for i, (h, r, t) in enumerate(rows, start=1):
        trip = Triplet(parse_entity(h), parse_relation(r), parse_entity(t), origin_line=i)
        if not trip.signature_ok():
            raise StageError(f"{stage_name}: row {i} endpoint/relation mismatch")
        triplets.append(trip)
    return KnowledgeGraph._from_clean(triplets)

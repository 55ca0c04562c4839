"""Circular (Morgan-style) fingerprints over parsed molecular graphs.

Every atom contributes one environment identifier per radius level. The level-0
identifier hashes the atom's local invariant (element, degree, total hydrogen
count, formal charge, aromatic flag, ring flag); each further level hashes the
previous identifier together with the sorted (bond order, neighbor previous
identifier) list. Degree-0 atoms gain no information from iteration and keep
their level-0 identifier, so an isolated atom yields exactly one identifier.

Identifiers from all levels are collected as a set and folded onto a
fixed-length bit vector via ``identifier mod nbits``. Hashing is 64-bit
FNV-1a over a little-endian byte layout, chosen for cross-platform
determinism; stereochemistry never participates.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from ..errors import StageError
from ..model import KnowledgeGraph, StageLog, StageTimer
from .smiles import MoleculeGraph, parse_smiles

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF

DEFAULT_RADIUS = 2
DEFAULT_NBITS = 2048


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def _atom_seed(atom) -> int:
    elem = atom.element.encode("utf-8")
    return fnv1a64(
        b"A"
        + struct.pack("<B", len(elem))
        + elem
        + struct.pack(
            "<BHhBB",
            atom.degree,
            atom.hydrogens,
            atom.charge,
            int(atom.aromatic),
            int(atom.in_ring),
        )
    )


def atom_environments(mol: MoleculeGraph, radius: int) -> list[list[int]]:
    """Per-level identifier lists: result[k][i] is atom i's identifier at
    radius k. Levels run 0..radius inclusive."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    adj = mol.neighbors()
    current = [_atom_seed(a) for a in mol.atoms]
    levels = [current]
    for _ in range(radius):
        nxt = []
        for idx, incident in enumerate(adj):
            if not incident:
                nxt.append(current[idx])
                continue
            pairs = sorted((order, current[nbr]) for nbr, order in incident)
            payload = b"E" + struct.pack("<Q", current[idx])
            for order, nbr_id in pairs:
                payload += struct.pack("<BQ", order, nbr_id)
            nxt.append(fnv1a64(payload))
        levels.append(nxt)
        current = nxt
    return levels


@dataclass(frozen=True)
class Fingerprint:
    """Fixed-length binary vector; ``bits`` holds the set bit indices."""

    nbits: int
    bits: frozenset[int]

    def __post_init__(self) -> None:
        if any(b < 0 or b >= self.nbits for b in self.bits):
            raise ValueError("bit index out of range")

    def to_hex(self) -> str:
        """Lowercase hex, ``nbits / 4`` characters, bit index 0 at the most
        significant position."""
        value = 0
        for b in self.bits:
            value |= 1 << (self.nbits - 1 - b)
        return format(value, f"0{self.nbits // 4}x")

    @classmethod
    def from_hex(cls, text: str, nbits: int = DEFAULT_NBITS) -> "Fingerprint":
        value = int(text, 16)
        bits = frozenset(
            nbits - 1 - i for i in range(nbits) if value >> i & 1
        )
        return cls(nbits, bits)


def morgan_fingerprint(
    mol: MoleculeGraph, radius: int = DEFAULT_RADIUS, nbits: int = DEFAULT_NBITS
) -> Fingerprint:
    """Fold all environment identifiers of radii 0..radius onto nbits bits."""
    ids = set()
    for level in atom_environments(mol, radius):
        ids.update(level)
    return Fingerprint(nbits, frozenset(i % nbits for i in ids))


def fingerprint_smiles(
    smiles: str, radius: int = DEFAULT_RADIUS, nbits: int = DEFAULT_NBITS
) -> Fingerprint:
    return morgan_fingerprint(parse_smiles(smiles), radius, nbits)


def fingerprint_all(
    g: KnowledgeGraph,
    smiles_dict: dict[str, str],
    radius: int = DEFAULT_RADIUS,
    nbits: int = DEFAULT_NBITS,
) -> tuple[dict[str, Fingerprint], StageLog]:
    """One fingerprint per Compound node in the graph, keyed and ordered by the
    rendered compound id. The SMILES-less filter must already have run: any
    missing or unparseable entry here is a pipeline-order bug and is fatal."""
    timer = StageTimer()
    table: dict[str, Fingerprint] = {}
    for node in sorted(g.nodes_of_type("Compound"), key=lambda n: n.text):
        smiles = smiles_dict.get(node.text)
        if smiles is None:
            raise StageError(
                f"fingerprints: no SMILES for {node.text}; "
                "run the SMILES filter stage first"
            )
        try:
            mol = parse_smiles(smiles)
        except Exception as exc:
            raise StageError(
                f"fingerprints: unparseable SMILES for {node.text}: {exc}"
            ) from exc
        table[node.text] = morgan_fingerprint(mol, radius, nbits)
    rows = len(g)
    return table, StageLog(
        stage_name="fingerprints",
        rows_in=rows,
        rows_removed=0,
        rows_added=0,
        rows_out=rows,
        wall_time=timer.elapsed(),
        details={"fingerprints_generated": len(table)},
    )


def write_fingerprints(path, table: dict[str, Fingerprint]) -> None:
    """TSV: compound_id, lowercase hex bits (index 0 = most significant)."""
    from pathlib import Path

    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for compound in sorted(table):
            fh.write(f"{compound}\t{table[compound].to_hex()}\n")

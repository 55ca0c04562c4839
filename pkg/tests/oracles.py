"""Independent brute-force oracles, written before the engines they check.

Each oracle favors the most literal possible computation (recursive expansion,
exhaustive pairwise comparison, repeated substitution) over anything shared
with the production code paths.
"""

from __future__ import annotations

import struct

# --- circular-fingerprint environment enumerator ---------------------------
#
# Identifier contract (fixed here first, engine must match):
#   seed(atom)  = FNV1a64( b"A" + u8 len(elem) + elem utf-8 + u8 degree
#                          + u16le hydrogens + i16le charge
#                          + u8 aromatic + u8 in_ring )
#   step(a, k)  = seed(a)                                  if k == 0
#               = step(a, k-1)                             if degree(a) == 0
#               = FNV1a64( b"E" + u64le step(a, k-1)
#                          + concat(u8 code + u64le step(nbr, k-1))
#                            over neighbors sorted by (code, step(nbr, k-1)) )
#   bond order codes: single 1, double 2, triple 3, aromatic 4.
# Environment identifiers are the set of step(a, k) over all atoms and all
# k in 0..radius; each sets bit (identifier mod nbits).

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64_reference(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def _seed_reference(atom) -> int:
    elem = atom.element.encode("utf-8")
    payload = (
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
    return fnv1a64_reference(payload)


def environment_id_recursive(mol, atom_idx: int, level: int) -> int:
    """Identifier of one atom environment, by full recursive expansion of the
    neighborhood tree (no memoization, recomputed from scratch per call)."""
    if level == 0:
        return _seed_reference(mol.atoms[atom_idx])
    incident = [
        (b.b if b.a == atom_idx else b.a, b.order)
        for b in mol.bonds
        if atom_idx in (b.a, b.b)
    ]
    prev = environment_id_recursive(mol, atom_idx, level - 1)
    if not incident:
        return prev
    pairs = sorted(
        (order, environment_id_recursive(mol, nbr, level - 1))
        for nbr, order in incident
    )
    payload = b"E" + struct.pack("<Q", prev)
    for order, nbr_id in pairs:
        payload += struct.pack("<BQ", order, nbr_id)
    return fnv1a64_reference(payload)


def enumerate_environment_ids(mol, radius: int) -> set[int]:
    """All environment identifiers for radii 0..radius, brute force."""
    ids: set[int] = set()
    for level in range(radius + 1):
        for idx in range(len(mol.atoms)):
            ids.add(environment_id_recursive(mol, idx, level))
    return ids


def fingerprint_bits_bruteforce(mol, radius: int, nbits: int) -> set[int]:
    return {ident % nbits for ident in enumerate_environment_ids(mol, radius)}


# --- leakage: exhaustive pairwise comparison --------------------------------


def _canon_entity(text: str, entity_map: dict[str, str]) -> str:
    return entity_map.get(text, text)


def _canon_relation(
    origin: str,
    label: str,
    relation_map: dict[tuple[str, str], str],
    canonical_labels: set[str],
):
    """Already-canonical labels are fixed points; mapped keys compare by
    canonical label; everything else compares as the raw (origin, label)."""
    if label in canonical_labels:
        return ("label", label)
    if (origin, label) in relation_map:
        return ("label", relation_map[(origin, label)])
    return ("raw", origin, label)


def leaked_count_bruteforce(
    train: list[tuple[str, str, str, str]],
    eval_split: list[tuple[str, str, str, str]],
    entity_map: dict[str, str],
    relation_map: dict[tuple[str, str], str],
    detector: str,
    include_inverse: bool = True,
    canonical_labels: set[str] | None = None,
) -> int:
    """Count eval triplets with a matching train triplet, comparing every pair.

    Triplets are (head_text, origin, label, tail_text). ``relation_map`` keys
    are (origin, label) pairs mapping to canonical labels; entity and relation
    texts absent from the maps canonicalize to themselves.
    """
    canon_set = (
        set(relation_map.values()) if canonical_labels is None else canonical_labels
    )

    def pair_leaks(ev, tr) -> bool:
        h, o, l, t = ev
        h2, o2, l2, t2 = tr
        straight = (h2 == h and t2 == t)
        inverted = include_inverse and (h2 == t and t2 == h)
        if detector == "duplicate_inverse":
            return (o2, l2) == (o, l) and (straight or inverted)
        canon_eq = _canon_relation(o2, l2, relation_map, canon_set) == _canon_relation(
            o, l, relation_map, canon_set
        )
        if detector == "relation_redundancy":
            return canon_eq and (straight or inverted)
        if detector == "entity_redundancy":
            ch, ct = _canon_entity(h, entity_map), _canon_entity(t, entity_map)
            ch2, ct2 = _canon_entity(h2, entity_map), _canon_entity(t2, entity_map)
            c_straight = (ch2 == ch and ct2 == ct)
            c_inverted = include_inverse and (ch2 == ct and ct2 == ch)
            return canon_eq and (c_straight or c_inverted)
        raise ValueError(f"unknown detector {detector}")

    if detector == "any":
        dets = ("duplicate_inverse", "relation_redundancy", "entity_redundancy")
        return sum(
            1
            for ev in eval_split
            if any(
                leaked_count_bruteforce(
                    train, [ev], entity_map, relation_map, d, include_inverse, canon_set
                )
                for d in dets
            )
        )
    return sum(1 for ev in eval_split if any(pair_leaks(ev, tr) for tr in train))


# --- id-map fixed point by repeated substitution ----------------------------


def resolve_by_substitution(mapping: dict, max_rounds: int = 10_000) -> dict:
    """Collapse chains by rewriting values until nothing changes. Raises
    ValueError on a cycle: odd cycles never stabilize, and even cycles
    stabilize only onto self-maps, which an acyclic chain can never produce
    (inputs must not contain explicit self-maps)."""
    current = dict(mapping)
    for _ in range(max_rounds):
        nxt = {k: current.get(v, v) for k, v in current.items()}
        if nxt == current:
            if any(k == v for k, v in current.items()):
                raise ValueError("no fixed point: mapping contains a cycle")
            return current
        current = nxt
    raise ValueError("no fixed point: mapping contains a cycle")


# --- split aggregation -------------------------------------------------------


def mean_and_population_std(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return mean, var ** 0.5

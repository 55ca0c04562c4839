import random

import pytest

from kgprep.chem import (
    Fingerprint,
    atom_environments,
    fingerprint_all,
    fingerprint_smiles,
    fnv1a64,
    morgan_fingerprint,
    parse_smiles,
)
from kgprep.errors import StageError

from conftest import FIXTURE_MOLECULES, graph_of
from molwrite import random_smiles
from oracles import fingerprint_bits_bruteforce, fnv1a64_reference

# Expected bit indices for "CCO" at radius 2 / 2048 bits, frozen from the
# recursive brute-force enumerator (tests/oracles.py) before the engine ran.
CCO_RADIUS2_BITS = frozenset({
    103, 161, 184, 331, 639, 1178, 1396, 1738, 1956,
})


def test_fnv1a_matches_reference_vectors():
    # standard FNV-1a 64-bit test vectors
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8
    for probe in (b"", b"a", b"foobar", b"\x00\xff"):
        assert fnv1a64(probe) == fnv1a64_reference(probe)


def test_methane_single_environment():
    fp = morgan_fingerprint(parse_smiles("C"), radius=2)
    assert len(fp.bits) == 1


def test_cco_frozen_oracle_bits():
    fp = fingerprint_smiles("CCO", radius=2, nbits=2048)
    assert fp.bits == CCO_RADIUS2_BITS


def test_engine_equals_bruteforce_enumerator():
    for smiles in FIXTURE_MOLECULES[:10]:
        mol = parse_smiles(smiles)
        engine = set(morgan_fingerprint(mol, radius=2, nbits=2048).bits)
        oracle = fingerprint_bits_bruteforce(mol, radius=2, nbits=2048)
        assert engine == oracle, smiles


def test_atom_order_permutation_invariance():
    rng = random.Random(11)
    for smiles in FIXTURE_MOLECULES:
        reference = fingerprint_smiles(smiles)
        mol = parse_smiles(smiles)
        for _ in range(5):
            variant = random_smiles(mol, rng)
            assert fingerprint_smiles(variant).bits == reference.bits, (smiles, variant)


def test_simple_permutation_pairs():
    assert fingerprint_smiles("CCO").bits == fingerprint_smiles("OCC").bits
    assert fingerprint_smiles("N#Cc1ccccc1").bits == fingerprint_smiles("c1ccccc1C#N").bits


def test_determinism_across_calls():
    a = fingerprint_smiles("CC(=O)Oc1ccccc1C(=O)O")
    b = fingerprint_smiles("CC(=O)Oc1ccccc1C(=O)O")
    assert a == b


def test_monotone_environment_count():
    for smiles in FIXTURE_MOLECULES:
        mol = parse_smiles(smiles)
        if len(mol.atoms) < 2 or not mol.bonds:
            continue
        levels = atom_environments(mol, radius=3)
        distinct = [len(set(level)) for level in levels]
        assert all(b >= a for a, b in zip(distinct, distinct[1:])), smiles


def test_bit_count_bound():
    for smiles in FIXTURE_MOLECULES:
        mol = parse_smiles(smiles)
        for radius in (0, 1, 2):
            fp = morgan_fingerprint(mol, radius=radius)
            assert len(fp.bits) <= len(mol.atoms) * (radius + 1)
            assert len(fp.bits) >= 1


def test_radius_zero_is_atom_invariants_only():
    # CH3 (C, degree 1), CH2 (C, degree 2) and OH all carry distinct invariants
    mol = parse_smiles("CCO")
    fp = morgan_fingerprint(mol, radius=0)
    assert len(fp.bits) == 3
    assert len(set(atom_environments(mol, 0)[0])) == 3


def test_hex_round_trip_and_layout():
    fp = Fingerprint(nbits=2048, bits=frozenset({0, 7, 2047}))
    text = fp.to_hex()
    assert len(text) == 512 and text == text.lower()
    assert text[0] == "8"  # bit 0 is the most significant of the first nibble
    assert text[1] == "1"  # bit 7 is the least significant of the second nibble
    assert text[-1] == "1"  # bit 2047 is the least significant overall
    assert Fingerprint.from_hex(text) == fp


def test_fingerprint_all_counts_and_order():
    g = graph_of(
        ("Compound::PubChem_Compounds:2", "GNBR::CMP_BIND::Compound:Gene", "Gene::NCBI:1"),
        ("Compound::PubChem_Compounds:1", "GNBR::CMP_BIND::Compound:Gene", "Gene::NCBI:1"),
        ("Compound::PubChem_Compounds:3", "GNBR::CMP_BIND::Compound:Gene", "Gene::NCBI:2"),
    )
    smiles = {
        "Compound::PubChem_Compounds:1": "CCO",
        "Compound::PubChem_Compounds:2": "OCC",
        "Compound::PubChem_Compounds:3": "c1ccccc1",
    }
    table, log = fingerprint_all(g, smiles)
    assert log.details["fingerprints_generated"] == 3
    assert list(table) == sorted(table)
    # identical molecules written differently agree
    assert table["Compound::PubChem_Compounds:1"] == table["Compound::PubChem_Compounds:2"]


def test_fingerprint_all_missing_smiles_is_pipeline_bug():
    g = graph_of(
        ("Compound::PubChem_Compounds:1", "GNBR::CMP_BIND::Compound:Gene", "Gene::NCBI:1"),
    )
    with pytest.raises(StageError, match="SMILES"):
        fingerprint_all(g, {})

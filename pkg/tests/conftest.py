import pytest

from kgprep.ingest import parse_entity, parse_relation
from kgprep.model import KnowledgeGraph, Triplet

# Shared molecule fixtures: diverse coverage of the supported SMILES subset.
# The first ten are the oracle-equivalence set.
FIXTURE_MOLECULES = [
    "C",
    "CCO",
    "c1ccccc1",
    "CC(=O)O",
    "C1CCCCC1",
    "N#Cc1ccccc1",
    "CC(=O)Oc1ccccc1C(=O)O",
    "[NH4+].[Cl-]",
    "OCC(O)CO",
    "c1ccc2ccccc2c1",
    "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
    "C=CC=C",
    "CSC",
    "O=C=O",
    "c1ccncc1",
    "Clc1ccccc1",
    "BrCCBr",
    "[13CH4]",
    "C%12CCCCC%12",
]


def E(text: str):
    return parse_entity(text)


def R(text: str):
    return parse_relation(text)


def T(head: str, relation: str, tail: str, line: int = 0) -> Triplet:
    return Triplet(E(head), R(relation), E(tail), origin_line=line)


def graph_of(*rows) -> KnowledgeGraph:
    return KnowledgeGraph(T(*row) for row in rows)


@pytest.fixture
def tiny_graph() -> KnowledgeGraph:
    return graph_of(
        ("Gene::NCBI:1", "GNBR::B::Gene:Gene", "Gene::NCBI:2"),
        ("Gene::NCBI:2", "STRING::Binding::Gene:Gene", "Gene::NCBI:3"),
        ("Compound::PubChem_Compounds:10", "GNBR::B::Compound:Gene", "Gene::NCBI:1"),
    )

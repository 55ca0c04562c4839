"""Task-specific train/valid/test split generation and the three-detector
leakage audit.

A split shuffles the task's target triplets under a seed and partitions them
70/10/20 (valid and test sizes floored, remainder to train); every non-target
triplet stays in the context set. The audit asks, for each evaluation
triplet, whether the training split contains an equivalent counterpart:

* duplicate_inverse - same origin and label, endpoints equal or swapped;
* relation_redundancy - endpoints equal or swapped, labels equal after
  relation standardization;
* entity_redundancy - labels equal after standardization, endpoints equal or
  swapped after identifier standardization;
* any - the union of the three.

With empty equivalence tables, standardization is the identity and all
detectors reduce to duplicate_inverse.
"""

from __future__ import annotations

import json
import random
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .clean import HarmonizationTable
from .errors import StageError
from .model import KnowledgeGraph, Triplet
from .normalize import IdMapTable

DETECTORS = ("duplicate_inverse", "relation_redundancy", "entity_redundancy", "any")
SPLIT_PAIRS = ("train_valid", "train_test")


@dataclass(frozen=True)
class TaskSpec:
    """A link-prediction task: its name and unordered endpoint-type target."""

    name: str
    endpoint_types: frozenset[str]

    def matches(self, t: Triplet) -> bool:
        return {t.head.entity_type, t.tail.entity_type} == set(self.endpoint_types)


BUILTIN_TASKS: dict[str, TaskSpec] = {
    "ppi": TaskSpec("ppi", frozenset({"Gene"})),
    "drug_repurposing": TaskSpec("drug_repurposing", frozenset({"Compound", "Gene"})),
    "side_effect": TaskSpec("side_effect", frozenset({"Compound", "SideEffect"})),
}


@dataclass
class SplitBundle:
    task: str
    seed: int
    train: list[Triplet]
    valid: list[Triplet]
    test: list[Triplet]
    context: list[Triplet]

    def target_size(self) -> int:
        return len(self.train) + len(self.valid) + len(self.test)


def make_splits(g: KnowledgeGraph, task: TaskSpec, seed: int) -> SplitBundle:
    """Seeded uniform 70/10/20 partition of the task's target triplets."""
    target = []
    context = []
    for t in g.triplets:
        (target if task.matches(t) else context).append(t)
    if not target:
        raise StageError(f"task {task.name}: target triplet set is empty")
    shuffled = list(target)
    random.Random(seed).shuffle(shuffled)
    n = len(shuffled)
    n_valid = n // 10
    n_test = n // 5
    n_train = n - n_valid - n_test
    return SplitBundle(
        task=task.name,
        seed=seed,
        train=shuffled[:n_train],
        valid=shuffled[n_train : n_train + n_valid],
        test=shuffled[n_train + n_valid :],
        context=context,
    )


@dataclass(frozen=True)
class LeakCell:
    leaked: int
    total: int

    @property
    def ratio(self) -> float:
        return self.leaked / self.total if self.total else 0.0


@dataclass
class LeakageReport:
    task: str
    seed: int
    cells: dict[tuple[str, str], LeakCell] = field(default_factory=dict)

    def ratio(self, detector: str, split_pair: str) -> float:
        return self.cells[(detector, split_pair)].ratio


def _entity_mapping(equiv_entities) -> dict:
    if equiv_entities is None:
        return {}
    if isinstance(equiv_entities, IdMapTable):
        return {k.text: v.text for k, v in equiv_entities.mapping.items()}
    if isinstance(equiv_entities, dict):
        return {
            (k.text if hasattr(k, "text") else k): (v.text if hasattr(v, "text") else v)
            for k, v in equiv_entities.items()
        }
    raise TypeError("equiv_entities must be an IdMapTable, dict or None")


def detect_leakage(
    bundle: SplitBundle,
    equiv_entities: IdMapTable | dict | None = None,
    equiv_relations: HarmonizationTable | None = None,
    detector: str = "all",
    include_inverse: bool = True,
) -> LeakageReport:
    """Leaked-count report for train/valid and train/test under the chosen
    detector ("all" computes every detector plus their union)."""
    if detector != "all" and detector not in DETECTORS:
        raise ValueError(f"unknown detector {detector!r}")
    wanted = DETECTORS if detector == "all" else (detector,)
    table = equiv_relations or HarmonizationTable.empty()
    entity_map = _entity_mapping(equiv_entities)

    def canon_e(text: str) -> str:
        return entity_map.get(text, text)

    def canon_r(rel):
        return table.canon_label(rel)

    base_detectors = [d for d in ("duplicate_inverse", "relation_redundancy",
                                  "entity_redundancy") if d in wanted or "any" in wanted]

    raw_index: set = set()
    rel_index: set = set()
    ent_index: set = set()
    for t in bundle.train:
        h, tl = t.head.text, t.tail.text
        r = t.relation
        if "duplicate_inverse" in base_detectors:
            raw_index.add((h, r.origin, r.label, tl))
        if "relation_redundancy" in base_detectors or "entity_redundancy" in base_detectors:
            cr = canon_r(r)
            if "relation_redundancy" in base_detectors:
                rel_index.add((h, cr, tl))
            if "entity_redundancy" in base_detectors:
                ent_index.add((canon_e(h), cr, canon_e(tl)))

    report = LeakageReport(task=bundle.task, seed=bundle.seed)
    for pair_name, eval_split in (("train_valid", bundle.valid), ("train_test", bundle.test)):
        counts = dict.fromkeys(DETECTORS, 0)
        for t in eval_split:
            h, tl = t.head.text, t.tail.text
            r = t.relation
            dup = rel_leak = ent_leak = False
            if "duplicate_inverse" in base_detectors:
                dup = (h, r.origin, r.label, tl) in raw_index or (
                    include_inverse and (tl, r.origin, r.label, h) in raw_index
                )
            if "relation_redundancy" in base_detectors:
                cr = canon_r(r)
                rel_leak = (h, cr, tl) in rel_index or (
                    include_inverse and (tl, cr, h) in rel_index
                )
            if "entity_redundancy" in base_detectors:
                cr = canon_r(r)
                ch, ct = canon_e(h), canon_e(tl)
                ent_leak = (ch, cr, ct) in ent_index or (
                    include_inverse and (ct, cr, ch) in ent_index
                )
            counts["duplicate_inverse"] += dup
            counts["relation_redundancy"] += rel_leak
            counts["entity_redundancy"] += ent_leak
            counts["any"] += dup or rel_leak or ent_leak
        total = len(eval_split)
        for d in wanted:
            report.cells[(d, pair_name)] = LeakCell(counts[d], total)
    return report


@dataclass
class AggregatedLeakage:
    """Per-cell mean and population standard deviation across seeded runs."""

    task: str
    seeds: list[int]
    cells: dict[tuple[str, str], dict]

    def to_records(self) -> list[dict]:
        records = []
        for (detector, split_pair), cell in sorted(self.cells.items()):
            records.append({
                "task": self.task,
                "detector": detector,
                "split_pair": split_pair,
                "leaked": cell["leaked"],
                "total": cell["total"],
                "ratio": cell["ratio"],
                "mean": cell["mean"],
                "std": cell["std"],
                "seeds": self.seeds,
            })
        return records


def audit_report(reports: list[LeakageReport]) -> AggregatedLeakage:
    """Aggregate seeded leakage reports for one task: mean and population
    standard deviation of each (detector, split-pair) ratio."""
    if not reports:
        raise ValueError("audit_report needs at least one run")
    tasks = {r.task for r in reports}
    if len(tasks) != 1:
        raise ValueError(f"cannot aggregate across tasks {sorted(tasks)}")
    keys = set(reports[0].cells)
    cells: dict[tuple[str, str], dict] = {}
    for key in keys:
        ratios = [r.cells[key].ratio for r in reports]
        cells[key] = {
            "leaked": [r.cells[key].leaked for r in reports],
            "total": [r.cells[key].total for r in reports],
            "ratio": ratios,
            "mean": statistics.fmean(ratios),
            "std": statistics.pstdev(ratios),
        }
    return AggregatedLeakage(
        task=reports[0].task,
        seeds=[r.seed for r in reports],
        cells=cells,
    )


def write_bundle(out_dir, bundle: SplitBundle, preserve_order: bool = False) -> None:
    """train/valid/test/context TSVs in triplet format."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, triplets in (
        ("train", bundle.train),
        ("valid", bundle.valid),
        ("test", bundle.test),
        ("context", bundle.context),
    ):
        rendered = [t.render() for t in triplets]
        if not preserve_order:
            rendered.sort()
        with (out / f"{name}.tsv").open("w", encoding="utf-8", newline="\n") as fh:
            for h, r, tl in rendered:
                fh.write(f"{h}\t{r}\t{tl}\n")


def write_leakage_json(path, aggregates: list[AggregatedLeakage]) -> None:
    records = []
    for agg in aggregates:
        records.extend(agg.to_records())
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(records, fh, indent=2, sort_keys=True)
        fh.write("\n")

#!/usr/bin/env python3
"""End-to-end demo: generate a synthetic corpus, run the full pipeline on it,
and print the stage ledger plus the leakage summary."""

import argparse
import json
import tempfile
from pathlib import Path

from kgprep.config import load_config
from kgprep.corpus import build_corpus
from kgprep.pipeline import run_pipeline


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--keep", metavar="DIR", help="write into DIR instead of a temp dir")
    args = parser.parse_args()

    workdir = Path(args.keep) if args.keep else Path(tempfile.mkdtemp(prefix="kgprep-demo-"))
    corpus = build_corpus(workdir, total_rows=args.rows, seed=args.seed)
    config = load_config(corpus.config)
    report = run_pipeline(config)

    print(f"\n{'stage':<18}{'in':>8}{'removed':>9}{'added':>7}{'out':>8}  details")
    for stage in report.stages:
        details = ", ".join(f"{k}={v}" for k, v in sorted(stage.details.items()) if v)
        print(
            f"{stage.stage_name:<18}{stage.rows_in:>8}{stage.rows_removed:>9}"
            f"{stage.rows_added:>7}{stage.rows_out:>8}  {details}"
        )
    print(f"\nfinal graph: {report.node_total} nodes, {report.edge_total} edges")
    print(f"total wall time: {report.wall_time_seconds:.2f}s")

    leakage_path = Path(config.out_dir) / "leakage_report.json"
    if leakage_path.exists():
        records = json.loads(leakage_path.read_text())
        print("\nleakage (train/test, mean over seeds):")
        for record in records:
            if record["split_pair"] == "train_test":
                print(f"  {record['task']:<18}{record['detector']:<22}{record['mean']:.3f}")
    print(f"\noutputs under: {config.out_dir}")


if __name__ == "__main__":
    main()

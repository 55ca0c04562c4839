#!/usr/bin/env python3
"""Generate a synthetic triplet corpus with planted, exactly counted defects.

Writes the triplet file, every auxiliary table, a ready-to-run pipeline
config and an expected_counts.json with the per-stage counts the pipeline
must report on this input.
"""

import argparse
import dataclasses
import json
from pathlib import Path

from kgprep.corpus import build_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="corpus", help="output directory")
    parser.add_argument("--rows", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    corpus = build_corpus(args.out, total_rows=args.rows, seed=args.seed)
    counts_path = Path(args.out) / "expected_counts.json"
    counts_path.write_text(
        json.dumps(dataclasses.asdict(corpus.expected), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(f"corpus: {corpus.triplets} ({args.rows} rows)")
    print(f"config: {corpus.config}")
    print(f"expected counts: {counts_path}")
    print(f"run it with: kgprep --config {corpus.config} run")


if __name__ == "__main__":
    main()

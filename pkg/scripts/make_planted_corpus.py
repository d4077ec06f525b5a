#!/usr/bin/env python3
"""Generate a synthetic corpus with planted analogies, plus its problem file.

Usage:
    python scripts/make_planted_corpus.py OUT_DIR [--problems N] [--m M]
        [--pair-mode all|star] [--tokens N] [--seed S]

Writes OUT_DIR/corpus/*.txt and OUT_DIR/problems.json, ready for:
    relmap eval OUT_DIR/problems.json --corpus OUT_DIR/corpus --mode relational
"""

import argparse
from pathlib import Path

from relmap.dataset import Dataset, dump_problems
from relmap.planted import PlantedConfig, generate_planted_corpus


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out_dir")
    ap.add_argument("--problems", type=int, default=5)
    ap.add_argument("--m", type=int, default=5)
    ap.add_argument("--pair-mode", choices=("all", "star"), default="all")
    ap.add_argument("--tokens", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = Path(args.out_dir)
    cfg = PlantedConfig(n_problems=args.problems, m=args.m,
                        pair_mode=args.pair_mode, target_tokens=args.tokens,
                        seed=args.seed)
    data = generate_planted_corpus(out / "corpus", cfg)
    dump_problems(Dataset(data.problems), out / "problems.json")
    print(f"corpus: {data.corpus_dir}")
    print(f"problems: {out / 'problems.json'} ({len(data.problems)} problems, "
          f"m={args.m}, {args.pair_mode} pairs)")


if __name__ == "__main__":
    main()

"""Check every goal in a directory of .coh files and print a verdict table.

Run from the repository root:

    python3 scripts/check_corpus.py
    python3 scripts/check_corpus.py --dir fixtures --flatten
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from cohcheck.cli import build_diagram, parse_source
from cohcheck.diagram_check import EQUAL, check_goal, diagram_shadow, explain_goal
from cohcheck.errors import CohError


@dataclass(frozen=True)
class CorpusConfig:
    directory: Path
    flatten: bool  # also report the symmetric flattening of braided files


def run(cfg: CorpusConfig) -> int:
    files = sorted(cfg.directory.glob("*.coh"))
    if not files:
        print(f"no .coh files under {cfg.directory}", file=sys.stderr)
        return 2
    width = max(len(p.stem) for p in files) + 2
    failures = 0
    for path in files:
        try:
            d = build_diagram(parse_source(path.read_text(encoding="utf-8")))
        except CohError as err:
            print(f"{path.stem:<{width}} error: {err}")
            failures += 1
            continue
        flat = diagram_shadow(d) if cfg.flatten and d.flavor == "B" else None
        for goal in d.goals:
            rep = explain_goal(d, goal)
            line = (
                f"{path.stem:<{width}} {goal.name:<8} {rep.verdict:<16} "
                f"left [{rep.left.word}]  right [{rep.right.word}]"
            )
            if flat is not None:
                line += f"  flattened {check_goal(flat, goal)}"
            print(line)
            if rep.verdict != EQUAL:
                failures += 1
    return 1 if failures else 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", type=Path, default=Path("fixtures"))
    ap.add_argument("--flatten", action="store_true",
                    help="also check braided files at the permutation level")
    args = ap.parse_args()
    return run(CorpusConfig(args.dir, args.flatten))


if __name__ == "__main__":
    sys.exit(main())

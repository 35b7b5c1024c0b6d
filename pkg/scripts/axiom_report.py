"""Report which monoidal functor axioms the builtin functors satisfy.

The copying functors keep products and units on the nose but reorder the
copies with a shuffle, so the braid axiom can fail even when every
associativity and unit square commutes. This prints the full matrix:

    python3 scripts/axiom_report.py
    python3 scripts/axiom_report.py --kinds doubling "nfold(3)" --max-len 3
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from cohcheck.errors import UnsupportedOp
from cohcheck.free_cat import GenSet, format_obj
from cohcheck.functor_eval import check_axioms, default_probe, make_builtin_spec

FLAVORS = {"M": "plain", "S": "symmetric", "B": "braided"}


@dataclass(frozen=True)
class ReportConfig:
    kinds: tuple[str, ...]
    gens: GenSet
    max_len: int


def run(cfg: ReportConfig) -> int:
    probe = default_probe(cfg.gens, cfg.max_len)
    print(f"probe: {len(probe)} objects over {{{', '.join(cfg.gens.names)}}}, "
          f"length <= {cfg.max_len}\n")
    for kind in cfg.kinds:
        for flavor, word in FLAVORS.items():
            try:
                spec = make_builtin_spec(kind, cfg.gens, flavor)
            except UnsupportedOp as err:
                print(f"{kind:<10} {word:<10} not definable: {err}")
                continue
            rep = check_axioms(spec, probe)
            status = "ok" if rep.ok else f"{len(rep.failures)} failures"
            print(f"{kind:<10} {word:<10} {rep.checked:>4} checks  {status}")
            by_axiom: dict[str, list] = {}
            for f in rep.failures:
                by_axiom.setdefault(f.axiom, []).append(f)
            for axiom, fails in sorted(by_axiom.items()):
                first = fails[0].witness
                shown = " | ".join(format_obj(x) for x in first)
                print(f"{'':<21}{axiom}: {len(fails)} witnesses, first ({shown})")
        print()
    return 0


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kinds", nargs="+",
                    default=["identity", "doubling", "nfold(3)", "nfold(4)"])
    ap.add_argument("--gens", nargs="+", default=["a", "b"])
    ap.add_argument("--max-len", type=int, default=2)
    args = ap.parse_args()
    return run(ReportConfig(tuple(args.kinds), GenSet("G", tuple(args.gens)), args.max_len))


if __name__ == "__main__":
    sys.exit(main())

"""Tabulate PIZ-QX, PIZ-BM, KWW and TOT on the shipped presentations.

    python3 scripts/compare_fixtures.py --coeff Z/2 --max-degree 2
"""

import argparse
from dataclasses import dataclass

from diffcech.abelian import FgAbGroup
from diffcech.cohomology import compare_theories
from diffcech.fixtures import PRESENTATIONS, fixture


@dataclass
class CompareConfig:
    coeff: str = "Z"
    max_degree: int = 2
    presentations: tuple = PRESENTATIONS
    include_bm: bool = True


def run(cfg: CompareConfig):
    A = FgAbGroup.parse(cfg.coeff)
    for name in cfg.presentations:
        cmp = compare_theories(fixture(name), A, cfg.max_degree, include_bm=cfg.include_bm)
        print(f"== {name}, coefficients {A}")
        print(cmp.text())


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--coeff", default="Z")
    ap.add_argument("--max-degree", type=int, default=2)
    ap.add_argument("--no-bm", action="store_true")
    ap.add_argument("--only", nargs="*", default=None, help="subset of fixture names")
    a = ap.parse_args()
    run(CompareConfig(a.coeff, a.max_degree, tuple(a.only) if a.only else PRESENTATIONS, not a.no_bm))

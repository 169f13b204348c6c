"""Print the chain-to-coproduct comparison between QX and B//M per fixture.

The report lists, per degree, the simplex counts on both sides and whether
the comparison map is well defined; CIRC2 is the instructive case.
"""

import argparse
from dataclasses import dataclass

from diffcech.acceptance import phi_psi_report
from diffcech.fixtures import PRESENTATIONS


@dataclass
class PhiPsiConfig:
    n_max: int = 3
    presentations: tuple = ("PT", "DISC2", "CIRC2", "CIRC4")


def run(cfg: PhiPsiConfig):
    for name in cfg.presentations:
        print(f"== {name}")
        print(phi_psi_report(name, cfg.n_max), end="")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--only", nargs="*", choices=PRESENTATIONS, default=None)
    a = ap.parse_args()
    cfg = PhiPsiConfig(a.n_max)
    if a.only:
        cfg = PhiPsiConfig(a.n_max, tuple(a.only))
    run(cfg)

"""Bundle classes, gauge groups and H^1 on every fixture and group that fits
under the enumeration cap."""

import argparse
import time
from dataclasses import dataclass

from diffcech.abelian import FgAbGroup
from diffcech.bundles import brute_force_class_count, classify_bundles, parse_group
from diffcech.cohomology import piz_cohomology
from diffcech.errors import ResourceCapError
from diffcech.fixtures import GROUPS, PRESENTATIONS, fixture


@dataclass
class ClassifyConfig:
    presentations: tuple = PRESENTATIONS
    groups: tuple = GROUPS
    brute_force: bool = True


def run(cfg: ClassifyConfig):
    print(f"{'presentation':<10} {'group':<5} {'classes':>7}  gauge orders        H^1      brute   seconds")
    for name in cfg.presentations:
        P = fixture(name)
        for g in cfg.groups:
            G = parse_group(g)
            t0 = time.perf_counter()
            try:
                classes = classify_bundles(P, G)
            except ResourceCapError as exc:
                print(f"{name:<10} {g:<5} {'-':>7}  skipped: {exc}")
                continue
            orders = ", ".join(str(c.gauge_order) for c in classes)
            h1 = str(piz_cohomology(P, FgAbGroup(0, (G.order,)), 1).answer) if G.is_abelian() else "-"
            bf = "-"
            if cfg.brute_force:
                try:
                    bf = str(brute_force_class_count(P, G)[0])
                except ResourceCapError:
                    bf = "cap"
            dt = time.perf_counter() - t0
            print(f"{name:<10} {g:<5} {len(classes):>7}  {orders:<18}  {h1:<8} {bf:<7} {dt:7.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--no-brute-force", action="store_true")
    a = ap.parse_args()
    run(ClassifyConfig(brute_force=not a.no_brute_force))

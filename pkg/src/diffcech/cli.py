"""Command line entry point.

Exit codes: 0 success, 1 validation or consistency failure, 2 resource cap,
3 malformed input. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .abelian import FgAbGroup
from .errors import ConsistencyError, DiffCechError, MalformedInputError, ValidationError
from .fixtures import BUILDERS, fixture, write_fixtures
from .site import PlotPresentation, load_presentation, validate_presentation


def _presentation(arg: str) -> PlotPresentation:
    """A JSON file, or the name of a built-in fixture."""
    path = Path(arg)
    if path.is_file():
        P = load_presentation(path)
    elif arg.upper() in BUILDERS:
        P = fixture(arg)
    else:
        raise MalformedInputError(f"{arg}: no such file or built-in presentation")
    rep = validate_presentation(P)
    if not rep.ok:
        raise ValidationError(f"{P.name}: invalid presentation", rep.violations)
    return P


def _coeff(text: str) -> FgAbGroup:
    return FgAbGroup.parse(text)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    P = _presentation(args.presentation)
    print(f"{P.name}: valid ({len(P.points)} points, {len(P.probes)} probes, "
          f"{len(P.morphisms)} morphisms after closure)")
    return 0


def cmd_cohomology(args) -> int:
    from .cohomology import cohomology_report, piz_cohomology

    P = _presentation(args.presentation)
    A = _coeff(args.coeff)
    theory = args.theory.upper()
    rep = cohomology_report(P, A, args.degree, theory, args.n_max)
    if theory == "TOT" and not args.no_cross_check:
        other = piz_cohomology(P, A, args.degree, "QX", args.n_max)
        if other.answer != rep.answer:
            raise ConsistencyError(f"TOT gives {rep.answer} but PIZ-QX gives {other.answer}")
        rep.caveats.append("agrees with PIZ-QX")
    _emit(rep.dumps() if args.format == "json" else f"{rep}\n", args.output)
    for c in rep.caveats:
        print(f"note: {c}", file=sys.stderr)
    return 0


def cmd_classify(args) -> int:
    from .bundles import brute_force_class_count, classify_bundles, parse_group

    P = _presentation(args.presentation)
    G = parse_group(args.group)
    classes = classify_bundles(P, G)
    if args.brute_force:
        count, _ = brute_force_class_count(P, G)
        if count != len(classes):
            raise ConsistencyError(f"{len(classes)} classes, brute force finds {count}")
    if args.format == "json":
        text = json.dumps({"presentation": P.name, "group": G.name, "classes": len(classes),
                           "details": [c.describe() for c in classes]},
                          indent=2, ensure_ascii=False) + "\n"
    else:
        lines = [f"{len(classes)} classes of {G.name}-bundles on {P.name}"]
        for i, c in enumerate(classes):
            d = c.describe()
            lines.append(f"  class {i}: {d['size']} cocycles, gauge group of order {d['gauge_order']} "
                         f"({d['gauge_group']}), total space with {d['components']} components")
            if c.note:
                lines.append(f"    {c.note}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return 0


def cmd_compare(args) -> int:
    from .cohomology import compare_theories

    P = _presentation(args.presentation)
    cmp = compare_theories(P, _coeff(args.coeff), args.max_degree, include_bm=not args.no_bm)
    if args.format == "json":
        text = json.dumps(cmp.to_json(), indent=2, ensure_ascii=False) + "\n"
    else:
        text = cmp.text()
    _emit(text, args.output)
    return 0


def cmd_selftest(args) -> int:
    from .acceptance import AcceptanceConfig, selftest

    cfg = AcceptanceConfig(seed=args.seed)
    ok, report = selftest(cfg, log=lambda s: print(s, file=sys.stderr, flush=True))
    _emit(report, args.output)
    return 0 if ok else 1


def cmd_fixtures(args) -> int:
    for p in write_fixtures(args.out):
        print(p)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diffcech",
                                 description="Finite models of plot-based cohomology and bundles.")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_output(p, formats=True):
        if formats:
            p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", "-o", help="write the result here instead of stdout")

    p = sub.add_parser("validate", help="check a presentation")
    p.add_argument("presentation", help="JSON file or built-in name (PT, DISC2, CIRC2, CIRC4, SPH-OCT)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohomology", help="H^k by one theory")
    p.add_argument("presentation")
    p.add_argument("--coeff", default="Z", help="f.g. abelian group, e.g. Z, Z/2, Z^2 + Z/4")
    p.add_argument("--degree", "-k", type=int, required=True)
    p.add_argument("--theory", default="tot", choices=("piz-qx", "piz-bm", "kww", "tot"),
                   type=str.lower)
    p.add_argument("--n-max", type=int, default=None, help="truncation degree (default k+2)")
    p.add_argument("--no-cross-check", action="store_true",
                   help="skip the PIZ-QX comparison that accompanies TOT")
    with_output(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("classify", help="classify principal bundles")
    p.add_argument("presentation")
    p.add_argument("--group", required=True, help="group JSON file, or Zn / Sn")
    p.add_argument("--brute-force", action="store_true", help="also count with the labeling oracle")
    with_output(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compare", help="tabulate all theories")
    p.add_argument("presentation")
    p.add_argument("--coeff", default="Z")
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--no-bm", action="store_true", help="skip the bar-construction route")
    with_output(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=0)
    with_output(p, formats=False)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("fixtures", help="write the built-in presentations and groups as JSON")
    p.add_argument("--out", default="fixtures")
    p.set_defaults(func=cmd_fixtures)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return exc.exit_code
    except DiffCechError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

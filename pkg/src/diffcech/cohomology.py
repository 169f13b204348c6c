"""The cohomology pipelines: PIZ (through QX or B//M), KWW (Čech nerve of the
nebula) and TOT (totalization of Γ(A[k]) against functions on QX)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .abelian import FgAbGroup, Z
from .complexes import CochainComplex, DoubleComplex, concentrated, total_cochain_complex
from .dold_kan import alternating_coface, gamma, normalized_chain, normalized_coface
from .errors import BoundError, ConsistencyError, DiffCechError, ResourceCapError
from .linalg import IntMatrix
from .simplicial import CosimplicialAbGroup, functions_cosimplicial
from .site import (PlotPresentation, bar_construction, cech_of_nebula, gauge_monoid, nebula,
                   phi_psi_compare, q_resolution)

THEORIES = ("PIZ-QX", "PIZ-BM", "KWW", "TOT")


@dataclass
class CohomologyReport:
    theory: str
    degree: int
    answer: FgAbGroup | None
    caveats: list = field(default_factory=list)
    census: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        a = self.answer
        return {"theory": self.theory, "degree": self.degree,
                "free_rank": None if a is None else a.free_rank,
                "torsion": None if a is None else list(a.torsion),
                "caveats": list(self.caveats), "census": self.census}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def __str__(self):
        return f"H^{self.degree} = {self.answer if self.answer is not None else '?'}"


def _bound(k: int, n_max: int | None) -> int:
    if k < 0:
        raise BoundError("cohomological degree must be non-negative")
    n_max = k + 2 if n_max is None else n_max
    if n_max < k + 2:
        raise BoundError(f"degree {k} needs the resolution up to degree {k + 2}, got {n_max}")
    return n_max


def coface_cohomology(F: CosimplicialAbGroup, degrees, cross_check: bool | None = None
                      ) -> tuple[dict, CochainComplex]:
    """H^k(N^co F) for the given degrees, checked against the unnormalized complex."""
    N = normalized_coface(F, cross_check)
    C = alternating_coface(F)
    out = {}
    for k in degrees:
        if k > N.reliable_max:
            raise BoundError(f"H^{k} is not determined by a {F.n_max}-truncated object")
        h = N.cohomology(k)
        if C.cohomology(k) != h:
            raise ConsistencyError(f"normalized and alternating coface complexes disagree in degree {k}")
        out[k] = h
    return out, N


def _truncation_caveat(n_max):
    return f"computed from the {n_max}-truncated simplicial object"


def piz_cohomology(P: PlotPresentation, A: FgAbGroup, k: int, route: str = "QX",
                   n_max: int | None = None) -> CohomologyReport:
    n_max = _bound(k, n_max)
    route = route.upper()
    caveats = [_truncation_caveat(n_max)]
    if route == "QX":
        X = q_resolution(P, n_max)
        theory = "PIZ-QX"
    elif route == "BM":
        M = gauge_monoid(P)
        X = bar_construction(nebula(P), M, n_max)
        theory = "PIZ-BM"
        caveats.append("gauge monoid treated as discrete")
        phi = phi_psi_compare(P, min(n_max, 2))
        bad = [e["degree"] for e in phi["degrees"] if not e["phi_well_defined"]]
        if bad:
            caveats.append(f"chain-to-coproduct comparison with QX not well defined in degrees {bad}")
    else:
        raise DiffCechError(f"unknown route {route!r}; use QX or BM")
    F = functions_cosimplicial(X, A, n_max)
    res, N = coface_cohomology(F, [k])
    census = {"simplices": list(X.sizes), "components": list(X.ncomp),
              "normalized_ranks": [N.rank(i) for i in range(n_max + 1)]}
    return CohomologyReport(theory, k, res[k], caveats, census)


def kww_cohomology(P: PlotPresentation, A: FgAbGroup, k: int, n_max: int | None = None
                   ) -> CohomologyReport:
    n_max = _bound(k, n_max)
    X = cech_of_nebula(P, n_max)
    F = functions_cosimplicial(X, A, n_max)
    res, N = coface_cohomology(F, [k])
    census = {"simplices": list(X.sizes), "components": list(X.ncomp),
              "normalized_ranks": [N.rank(i) for i in range(n_max + 1)]}
    return CohomologyReport("KWW", k, res[k], [_truncation_caveat(n_max)], census)


def gamma_double_complex(F: CosimplicialAbGroup, k: int, N: CochainComplex | None = None
                         ) -> tuple[DoubleComplex, dict]:
    """D^{p,q} = N^co_p(F) ⊗ N_q(Γ(ℤ[k])) with coefficients those of F.

    Both normalizations are computed as kernels (of codegeneracies and of
    faces d_1..d_q), not read off from the construction of Γ. Only columns
    p <= k + 2 are built: with q <= k + 1 nothing further right meets total
    degrees -1, 0, 1. A precomputed N^co(F) may be passed in.
    """
    if F.n_max < k + 2:
        raise BoundError(f"totalization in degree {k} needs the cosimplicial object up to {k + 2}")
    q_max = min(k + 1, F.n_max - 1)
    p_max = min(F.n_max, q_max + 1)
    N = normalized_coface(F) if N is None else N
    Gm = gamma(concentrated(Z, k), q_max)
    C = normalized_chain(Gm, q_max)
    ranks, dh, dv = {}, {}, {}
    for p in range(p_max + 1):
        for q in range(q_max + 1):
            r = N.rank(p) * C.rank(q)
            if r:
                ranks[(p, q)] = r
    for (p, q) in ranks:
        if (p + 1, q) in ranks:
            dh[(p, q)] = N.diff(p).kron(IntMatrix.identity(C.rank(q)))
        if (p, q - 1) in ranks:
            dv[(p, q)] = IntMatrix.identity(N.rank(p)).kron(C.diff(q))
    D = DoubleComplex(ranks, dh, dv, F.coeff)
    census = {"gamma_ranks": list(Gm.ranks), "gamma_normalized_ranks": [C.rank(q) for q in range(q_max + 1)],
              "normalized_coface_ranks": [N.rank(p) for p in range(p_max + 1)]}
    return D, census


def tot_h0(F: CosimplicialAbGroup, k: int, N: CochainComplex | None = None) -> tuple[FgAbGroup, dict]:
    D, census = gamma_double_complex(F, k, N)
    T = total_cochain_complex(D)
    census["total_ranks"] = {str(n): T.rank(n) for n in (-1, 0, 1)}
    return T.cohomology(0), census


def tot_cohomology(P: PlotPresentation, A: FgAbGroup, k: int, n_max: int | None = None
                   ) -> CohomologyReport:
    n_max = _bound(k, n_max)
    X = q_resolution(P, n_max)
    F = functions_cosimplicial(X, A, n_max)
    h, census = tot_h0(F, k)
    census = {"simplices": list(X.sizes), "components": list(X.ncomp), **census}
    return CohomologyReport("TOT", k, h, [_truncation_caveat(n_max)], census)


def cohomology_report(P: PlotPresentation, A: FgAbGroup, k: int, theory: str,
                      n_max: int | None = None) -> CohomologyReport:
    t = theory.upper()
    if t == "PIZ-QX":
        return piz_cohomology(P, A, k, "QX", n_max)
    if t == "PIZ-BM":
        return piz_cohomology(P, A, k, "BM", n_max)
    if t == "KWW":
        return kww_cohomology(P, A, k, n_max)
    if t == "TOT":
        return tot_cohomology(P, A, k, n_max)
    raise DiffCechError(f"unknown theory {theory!r}; choose from {', '.join(THEORIES)}")


@dataclass
class Comparison:
    presentation: str
    coeff: str
    max_degree: int
    table: dict  # theory -> list of str (or None when skipped)
    skipped: dict
    agree: list  # per degree: all computed theories agree

    def to_json(self) -> dict:
        return {"presentation": self.presentation, "coeff": self.coeff, "max_degree": self.max_degree,
                "table": self.table, "skipped": self.skipped, "agree": self.agree}

    def text(self) -> str:
        cols = [t for t in THEORIES if t in self.table]
        width = max(8, *(len(v) for t in cols for v in self.table[t] if v))
        lines = ["k  " + "  ".join(t.ljust(width) for t in cols) + "  agree"]
        for k in range(self.max_degree + 1):
            cells = [(self.table[t][k] or "-").ljust(width) for t in cols]
            lines.append(f"{k}  " + "  ".join(cells) + f"  {'yes' if self.agree[k] else 'NO'}")
        for t, why in self.skipped.items():
            lines.append(f"{t} skipped: {why}")
        return "\n".join(lines) + "\n"


def compare_theories(P: PlotPresentation, A: FgAbGroup, k_max: int, include_bm: bool = True
                     ) -> Comparison:
    """Every theory in degrees 0..k_max; disagreements are reported, not raised."""
    n_max = k_max + 2
    degrees = list(range(k_max + 1))
    table, skipped = {}, {}

    def run(name, build):
        try:
            X = build()
            F = functions_cosimplicial(X, A, n_max)
            res, _ = coface_cohomology(F, degrees)
            table[name] = [str(res[k]) for k in degrees]
        except (ResourceCapError, BoundError) as exc:
            skipped[name] = str(exc)
            table[name] = [None] * len(degrees)

    run("PIZ-QX", lambda: q_resolution(P, n_max))
    if include_bm:
        run("PIZ-BM", lambda: bar_construction(nebula(P), gauge_monoid(P), n_max))
    run("KWW", lambda: cech_of_nebula(P, n_max))
    try:
        F = functions_cosimplicial(q_resolution(P, n_max), A, n_max)
        N = normalized_coface(F)
        table["TOT"] = [str(tot_h0(F, k, N)[0]) for k in degrees]
    except (ResourceCapError, BoundError) as exc:
        skipped["TOT"] = str(exc)
        table["TOT"] = [None] * len(degrees)
    agree = []
    for k in degrees:
        vals = {table[t][k] for t in table if table[t][k] is not None}
        agree.append(len(vals) <= 1)
    return Comparison(P.name, str(A), k_max, table, skipped, agree)

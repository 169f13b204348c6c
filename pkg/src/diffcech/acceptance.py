"""The acceptance suite: one function per criterion, each returning a
pass/fail verdict with a short deterministic detail string.

The same functions back ``diffcech selftest`` and tests/test_acceptance.py.
Wall-clock budgets count toward the verdict but are kept out of the report
text so that reports are byte-stable.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from importlib import resources

import numpy as np
from scipy.sparse import csr_matrix

from .abelian import FgAbGroup, Z
from .bundles import (FiniteGroup, bg_nerve, brute_force_class_count, bundle_from_plot_cocycle,
                      classify_bundles, cocycle_from_labels, cocycle_groupoid, eg_nerve,
                      groupoid_for_nerve, trivial_cocycle, verify_principal)
from .cohomology import (gamma_double_complex, kww_cohomology, piz_cohomology, tot_cohomology,
                         tot_h0)
from .complexes import STATS, total_cochain_complex
from .dold_kan import (alternating_coface, delooping_shift_iso, em_object, gamma,
                       normalized_coface, round_trip_iso, wbar_iter)
from .errors import DiffCechError, ResourceCapError
from .fixtures import GROUPS, OCTAHEDRON, PRESENTATIONS, fixture
from .linalg import IntMatrix, smith_normal_form
from .oracles import CYCLE4, simplicial_cohomology, sympy_invariant_factors
from .random_models import random_chain_complex, random_cosimplicial
from .simplicial import (constant_simplicial_group, free_abelian, functions_cosimplicial,
                         is_k_coskeletal, moore_complex, moore_homotopy, nerve)
from .site import cech_of_nebula, phi_psi_compare, q_resolution

COEFFICIENTS = (Z, FgAbGroup(0, (2,)), FgAbGroup(0, (6,)), FgAbGroup(1, (4,)))


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 0
    snf_samples: int = 1000
    snf_max_dim: int = 6
    snf_max_entry: int = 100
    snf_budget: float = 10.0
    dk_samples: int = 100
    dk_top_degree: int = 4
    coface_samples: int = 100
    coface_max_degree: int = 3
    tot_samples: int = 100
    tot_max_degree: int = 3
    tot_budget: float = 60.0
    fixture_budget: float = 120.0
    delooping_max_k: int = 3
    coskeletal_k: int = 2
    coskeletal_probe: int = 4
    phi_psi_degree: int = 3


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = field(default=0.0, compare=False)

    def line(self) -> str:
        return f"criterion {self.number:2d} {self.name}: {'PASS' if self.passed else 'FAIL'} ({self.detail})"


def _rng(cfg: AcceptanceConfig, number: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, number])


def _dense(m: IntMatrix) -> np.ndarray:
    return np.array(m.to_dense(), dtype=object).reshape(m.rows, m.cols)


# 1 -------------------------------------------------------------------------------

def snf_soundness(cfg: AcceptanceConfig) -> tuple[bool, str]:
    """U·M·V = D, U and V unimodular, d_1 | d_2 | ..., and the diagonal agrees
    with an independent Smith form."""
    rng = _rng(cfg, 1)
    bad = []
    oracle_checked = 0
    for t in range(cfg.snf_samples):
        m, n = (int(x) for x in rng.integers(1, cfg.snf_max_dim + 1, 2))
        rows = rng.integers(-cfg.snf_max_entry, cfg.snf_max_entry + 1, (m, n))
        # sprinkle in rank-deficient cases
        if rng.random() < 0.2 and m > 1:
            rows[-1] = rows[0] * int(rng.integers(-3, 4))
        M = IntMatrix.from_dense(rows.tolist(), n)
        U, D, V = smith_normal_form(M)
        Md, Ud, Dd, Vd = _dense(M), _dense(U), _dense(D), _dense(V)
        if not np.array_equal(Ud.dot(Md).dot(Vd), Dd):
            bad.append(f"sample {t}: U M V != D")
            continue
        if abs(_det(Ud)) != 1 or abs(_det(Vd)) != 1:
            bad.append(f"sample {t}: transform not unimodular")
            continue
        off = Dd.copy()
        np.fill_diagonal(off, 0)
        if any(off.ravel()):
            bad.append(f"sample {t}: D not diagonal")
            continue
        diag = [int(Dd[i, i]) for i in range(min(m, n))]
        nz = [d for d in diag if d]
        if any(d < 0 for d in diag) or diag[:len(nz)] != nz:
            bad.append(f"sample {t}: diagonal not normalized")
            continue
        if any(nz[i + 1] % nz[i] for i in range(len(nz) - 1)):
            bad.append(f"sample {t}: divisibility chain broken")
            continue
        if t % 10 == 0:
            oracle_checked += 1
            if sympy_invariant_factors(rows.tolist(), m, n) != sorted(nz):
                bad.append(f"sample {t}: invariant factors differ from the reference Smith form")
    if bad:
        return False, bad[0]
    return True, f"{cfg.snf_samples} matrices, {oracle_checked} cross-checked against sympy"


def _det(A: np.ndarray) -> int:
    """Exact determinant by fraction-free elimination."""
    n = A.shape[0]
    M = [[int(x) for x in row] for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else 1


# 2 -------------------------------------------------------------------------------

def complex_sanity(cfg: AcceptanceConfig) -> tuple[bool, str]:
    """Builds complexes on every route and re-multiplies consecutive
    differentials with dense exact arithmetic; also requires that no
    construction anywhere in the process has tripped the built-in check."""
    rng = _rng(cfg, 2)
    complexes = []
    for name in PRESENTATIONS:
        P = fixture(name)
        for build in (q_resolution, cech_of_nebula):
            X = build(P, 3)
            F = functions_cosimplicial(X, Z, 3)
            complexes += [normalized_coface(F), alternating_coface(F)]
    for _ in range(10):
        C = random_chain_complex(rng)
        complexes.append(C)
        complexes.append(moore_complex(gamma(C, 5))[0])
        F, _ = random_cosimplicial(rng, 4, COEFFICIENTS[int(rng.integers(0, 4))])
        complexes.append(total_cochain_complex(gamma_double_complex(F, int(rng.integers(0, 3)))[0]))
    for A in COEFFICIENTS:
        complexes.append(moore_complex(wbar_iter(A, 2, 4))[0])
    products = 0
    for C in complexes:
        for n, m in C.d.items():
            nxt = C.d.get(n + C.step)
            if nxt is None or not m.cols or not nxt.rows:
                continue
            products += 1
            if not _product_vanishes(nxt, m):
                return False, f"{C!r}: d∘d != 0 out of degree {n}"
    if STATS["failures"]:
        return False, f"{STATS['failures']} constructions failed the built-in d∘d check"
    return True, f"{len(complexes)} complexes, {products} composites recomputed, no construction rejected"


def _sparse(m: IntMatrix) -> csr_matrix:
    r, c, v = [], [], []
    for i, row in m.nonzero_rows():
        for j, x in row.items():
            r.append(i)
            c.append(j)
            v.append(x)
    return csr_matrix((np.array(v, dtype=np.int64), (r, c)), shape=m.shape)


def _product_vanishes(a: IntMatrix, b: IntMatrix) -> bool:
    """a @ b == 0 with scipy's sparse product, falling back to exact dense
    arithmetic when int64 could overflow."""
    big = max((abs(x) for _, row in a.nonzero_rows() for x in row.values()), default=0)
    big *= max((abs(x) for _, row in b.nonzero_rows() for x in row.values()), default=0)
    if big * max(a.cols, 1) < 2 ** 62:
        return (_sparse(a) @ _sparse(b)).count_nonzero() == 0
    return not any(_dense(a).dot(_dense(b)).ravel())


# 3 -------------------------------------------------------------------------------

def dold_kan_round_trip(cfg: AcceptanceConfig) -> tuple[bool, str]:
    rng = _rng(cfg, 3)
    for t in range(cfg.dk_samples):
        C = random_chain_complex(rng, top=cfg.dk_top_degree)
        try:
            phi = round_trip_iso(C)
        except DiffCechError as exc:
            return False, f"sample {t}: {exc}"
        if any(phi[n].rows != C.rank(n) for n in phi):
            return False, f"sample {t}: rank mismatch"
    return True, f"{cfg.dk_samples} complexes in degrees 0..{cfg.dk_top_degree}, explicit isomorphisms"


# 4 -------------------------------------------------------------------------------

def coface_quasi_iso(cfg: AcceptanceConfig) -> tuple[bool, str]:
    rng = _rng(cfg, 4)
    n_max = cfg.coface_max_degree + 2
    kinds = {}
    for t in range(cfg.coface_samples):
        A = COEFFICIENTS[int(rng.integers(0, len(COEFFICIENTS)))]
        F, X = random_cosimplicial(rng, n_max, A)
        kinds[X.name] = kinds.get(X.name, 0) + 1
        N, C = normalized_coface(F, cross_check=False), alternating_coface(F)
        for k in range(cfg.coface_max_degree + 1):
            if N.cohomology(k) != C.cohomology(k):
                return False, f"sample {t} ({X.name}, {A}): H^{k} differs"
    return True, f"{cfg.coface_samples} random inputs, {len(kinds)} kinds of simplicial set, k <= {cfg.coface_max_degree}"


# 5 -------------------------------------------------------------------------------

def delooping_shift(cfg: AcceptanceConfig) -> tuple[bool, str]:
    inputs = []
    for A in COEFFICIENTS:
        inputs.append((f"c({A})", constant_simplicial_group(A, 3)))
        for j in (1, 2):
            inputs.append((f"K({A},{j})", em_object(A, j, j + 2)))
    for name in ("PT", "DISC2", "CIRC2"):
        inputs.append((f"Z[Q {name}]", free_abelian(q_resolution(fixture(name), 3))))
    for g in GROUPS:
        inputs.append((f"Z[B{g}]", free_abelian(bg_nerve(_group(g), 3))))
    for label, G in inputs:
        try:
            delooping_shift_iso(G)
        except DiffCechError as exc:
            return False, f"{label}: {exc}"
    for A in COEFFICIENTS:
        for k in range(cfg.delooping_max_k + 1):
            pi = moore_homotopy(wbar_iter(A, k, k + 2))
            want = [FgAbGroup.zero()] * k + [A]
            if list(pi.groups[:k + 1]) != want:
                return False, f"W̄^{k} c{A}: homotopy {[str(x) for x in pi.groups]}"
    return True, (f"shift isomorphism on {len(inputs)} simplicial groups; "
                  f"W̄^k homotopy for {len(COEFFICIENTS)} groups, k <= {cfg.delooping_max_k}")


# 6 -------------------------------------------------------------------------------

def totalization(cfg: AcceptanceConfig) -> tuple[bool, str]:
    rng = _rng(cfg, 6)
    n_max = cfg.tot_max_degree + 2
    cells = 0
    for t in range(cfg.tot_samples):
        A = COEFFICIENTS[int(rng.integers(0, len(COEFFICIENTS)))]
        F, X = random_cosimplicial(rng, n_max, A)
        N = normalized_coface(F)
        for k in range(cfg.tot_max_degree + 1):
            h, _ = tot_h0(F, k, N)
            cells += 1
            if h != N.cohomology(k):
                return False, f"sample {t} ({X.name}, {A}), k={k}: Tot gives {h}, N^co gives {N.cohomology(k)}"
    return True, f"{cfg.tot_samples} random inputs, {cells} (input, degree) cells"


# 7 -------------------------------------------------------------------------------

UNDERLYING = {"CIRC2": CYCLE4, "CIRC4": CYCLE4, "SPH-OCT": OCTAHEDRON}


def circle_fixtures(cfg: AcceptanceConfig) -> tuple[bool, str]:
    expected = {"CIRC2": ["Z", "Z", "0"], "CIRC4": ["Z", "Z", "0"], "SPH-OCT": ["Z", "0", "Z"]}
    for name, want in expected.items():
        oracle = [str(simplicial_cohomology(UNDERLYING[name], k)) for k in range(3)]
        if oracle != want:
            return False, f"{name}: reference complex gives {oracle}"
        P = fixture(name)
        for theory, run in (("PIZ-QX", lambda k: piz_cohomology(P, Z, k, "QX")),
                            ("KWW", lambda k: kww_cohomology(P, Z, k)),
                            ("TOT", lambda k: tot_cohomology(P, Z, k))):
            got = [str(run(k).answer) for k in range(3)]
            if got != oracle:
                return False, f"{name} {theory}: {got}, reference {oracle}"
    return True, "CIRC2, CIRC4 = (Z, Z, 0); SPH-OCT = (Z, 0, Z); three theories match the reference"


# 8 -------------------------------------------------------------------------------

def _group(name: str) -> FiniteGroup:
    return FiniteGroup.symmetric(3) if name == "S3" else FiniteGroup.cyclic(int(name[1:]))


def bundle_classification(cfg: AcceptanceConfig) -> tuple[bool, str]:
    circ2, disc2 = fixture("CIRC2"), fixture("DISC2")
    expect_circ = {"Z2": [2, 2], "Z3": [3, 3, 3], "S3": [6, 2, 3]}
    for g, orders in expect_circ.items():
        G = _group(g)
        classes = classify_bundles(circ2, G)
        got = [c.gauge_order for c in classes]
        count, stab = brute_force_class_count(circ2, G)
        if len(classes) != len(orders) or count != len(classes):
            return False, f"CIRC2/{g}: {len(classes)} classes, brute force {count}"
        if g == "S3" and sorted(got) != sorted(orders):
            return False, f"CIRC2/S3 gauge orders {got}"
        if sorted(stab) != sorted(got):
            return False, f"CIRC2/{g}: stabilizers {got} vs brute force {stab}"
    for g in GROUPS:
        G = _group(g)
        classes = classify_bundles(disc2, G)
        count, _ = brute_force_class_count(disc2, G)
        if len(classes) != 1 or count != 1:
            return False, f"DISC2/{g}: {len(classes)} classes, brute force {count}"
        c = classes[0]
        if c.gauge_order != G.order ** 2:
            return False, f"DISC2/{g}: gauge order {c.gauge_order}"
        if G.is_abelian():
            want = FgAbGroup(0, (G.order, G.order))
            if c.gauge_group != want:
                return False, f"DISC2/{g}: gauge group {c.gauge_group}"
    return True, "CIRC2: Z2 -> 2, Z3 -> 3, S3 -> 3 (gauge 6, 2, 3); DISC2: 1 class, gauge G x G; brute force agrees"


# 9 -------------------------------------------------------------------------------

def mobius_census(cfg: AcceptanceConfig) -> tuple[bool, str]:
    P = fixture("CIRC2")
    G = FiniteGroup.cyclic(2)
    out = []
    for label, g, want in (("twisted", cocycle_from_labels(P, G, {"i0U": {"0": "1"}}), 1),
                           ("trivial", trivial_cocycle(P, G), 2)):
        B = bundle_from_plot_cocycle(P, G, g)
        if B.n_components != want:
            return False, f"{label}: {B.n_components} components, expected {want}"
        rep = verify_principal(P, B)
        if not rep.ok:
            return False, f"{label}: {rep.violations[0]}"
        out.append(f"{label} {B.n_components}")
    return True, ", ".join(out) + " component(s); both principal"


# 10 ------------------------------------------------------------------------------

def coskeletality(cfg: AcceptanceConfig) -> tuple[bool, str]:
    k, n = cfg.coskeletal_k, cfg.coskeletal_probe
    checked, skipped = [], []
    cats = [(f"probes({name})", fixture(name).category) for name in PRESENTATIONS]
    for label, C in cats:
        r = is_k_coskeletal(nerve(C, n), k, n)
        if not r:
            return False, f"{label}: {r.witness}"
        checked.append(label)
    for g in GROUPS:
        G = _group(g)
        for label, X in ((f"B{g}", bg_nerve(G, n)), (f"E{g}", eg_nerve(G, n))):
            r = is_k_coskeletal(X, k, n)
            if not r:
                return False, f"{label}: {r.witness}"
            checked.append(label)
    for name in PRESENTATIONS:
        for g in GROUPS:
            try:
                C = cocycle_groupoid(fixture(name), _group(g))
                mode, Gd = groupoid_for_nerve(C, n)
                r = is_k_coskeletal(nerve(Gd, n), k, n)
            except ResourceCapError:
                skipped.append(f"{name}/{g}")
                continue
            if not r:
                return False, f"cocycles({name}/{g}, {mode}): {r.witness}"
            checked.append(f"{name}/{g}")
    detail = f"{len(checked)} nerves {k}-coskeletal through degree {n}"
    if skipped:
        detail += f"; over the enumeration cap: {', '.join(skipped)}"
    return True, detail


# 11 ------------------------------------------------------------------------------

def phi_psi_report(name: str, n_max: int) -> str:
    return json.dumps(phi_psi_compare(fixture(name), n_max), indent=2, ensure_ascii=False) + "\n"


def golden_phi_psi(name: str) -> str | None:
    f = resources.files("diffcech").joinpath("data", "golden", f"phi_psi_{name}.json")
    return f.read_text(encoding="utf-8") if f.is_file() else None


def phi_psi_diagnostic(cfg: AcceptanceConfig) -> tuple[bool, str]:
    keys = ("qx_size", "bm_size", "cardinalities_match", "phi_well_defined", "phi_lands_in_M",
            "psi_phi_identity", "phi_psi_identity", "psi_defined", "iso")
    verdicts = []
    for name in ("PT", "DISC2", "CIRC2"):
        text = phi_psi_report(name, cfg.phi_psi_degree)
        if text != phi_psi_report(name, cfg.phi_psi_degree):
            return False, f"{name}: report differs between runs"
        gold = golden_phi_psi(name)
        if gold is None:
            return False, f"{name}: golden report missing"
        if text != gold:
            return False, f"{name}: report differs from the golden file"
        rep = json.loads(text)
        if any(key not in e for e in rep["degrees"] for key in keys):
            return False, f"{name}: incomplete verdict"
        if name in ("PT", "DISC2") and not rep["iso_all_degrees"]:
            return False, f"{name}: φ/ψ not an isomorphism"
        verdicts.append(f"{name} iso={rep['iso_all_degrees']}")
    return True, "; ".join(verdicts) + "; golden reports match"


CRITERIA = {
    1: ("SNF soundness", snf_soundness),
    2: ("complex sanity", complex_sanity),
    3: ("Dold-Kan round trip", dold_kan_round_trip),
    4: ("coface quasi-isomorphism", coface_quasi_iso),
    5: ("delooping shift", delooping_shift),
    6: ("totalization", totalization),
    7: ("circle and sphere fixtures", circle_fixtures),
    8: ("bundle classification", bundle_classification),
    9: ("Mobius census", mobius_census),
    10: ("coskeletality", coskeletality),
    11: ("phi/psi diagnostic", phi_psi_diagnostic),
}

BUDGETS = {1: "snf_budget", 6: "tot_budget", 7: "fixture_budget"}


def run_criterion(number: int, cfg: AcceptanceConfig | None = None) -> CriterionResult:
    cfg = cfg or AcceptanceConfig()
    name, fn = CRITERIA[number]
    t0 = time.perf_counter()
    try:
        ok, detail = fn(cfg)
    except Exception as exc:  # a crash is a failed criterion, reported as such
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if number in BUDGETS:
        budget = getattr(cfg, BUDGETS[number])
        if dt > budget:
            ok = False
            detail += f"; over the {budget:g} s budget"
        else:
            detail += f"; within {budget:g} s"
    return CriterionResult(number, name, ok, detail, dt)


def run_suite(cfg: AcceptanceConfig | None = None, numbers=None, log=None) -> list[CriterionResult]:
    cfg = cfg or AcceptanceConfig()
    out = []
    for n in numbers or sorted(CRITERIA):
        r = run_criterion(n, cfg)
        if log is not None:
            log(f"{r.line()} [{r.seconds:.1f} s]")
        out.append(r)
    return out


def format_report(results: list[CriterionResult], cfg: AcceptanceConfig) -> str:
    lines = [f"diffcech selftest, seed {cfg.seed}"]
    lines += [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    lines.append("config " + json.dumps(asdict(cfg), sort_keys=True))
    return "\n".join(lines) + "\n"


def selftest(cfg: AcceptanceConfig | None = None, log=None) -> tuple[bool, str]:
    cfg = cfg or AcceptanceConfig()
    results = run_suite(cfg, log=log)
    return all(r.passed for r in results), format_report(results, cfg)

import json

import numpy as np
import pytest

from diffcech.abelian import FgAbGroup, Z
from diffcech.cohomology import (THEORIES, cohomology_report, compare_theories, kww_cohomology,
                                 piz_cohomology, tot_cohomology)
from diffcech.errors import BoundError, DiffCechError
from diffcech.fixtures import fixture
from diffcech.oracles import CYCLE4, simplicial_cohomology
from diffcech.random_models import random_presentation

Z2 = FgAbGroup.parse("Z/2")
ZERO = FgAbGroup.zero()


@pytest.mark.parametrize("theory", THEORIES)
def test_point(theory):
    P = fixture("PT")
    assert cohomology_report(P, Z, 0, theory).answer == Z
    assert cohomology_report(P, Z, 1, theory).answer == ZERO


@pytest.mark.parametrize("A", ["Z/2", "Z/6", "Z + Z/4"])
def test_point_any_coefficients_by_totalization(A):
    A = FgAbGroup.parse(A)
    P = fixture("PT")
    assert tot_cohomology(P, A, 0).answer == A
    assert tot_cohomology(P, A, 2).answer == ZERO


def test_circle_by_every_route():
    P = fixture("CIRC2")
    want = [simplicial_cohomology(CYCLE4, k) for k in range(3)]
    assert [str(w) for w in want] == ["Z", "Z", "0"]
    for k, w in enumerate(want):
        assert piz_cohomology(P, Z, k).answer == w
        assert kww_cohomology(P, Z, k).answer == w
        assert tot_cohomology(P, Z, k).answer == w


def test_octahedron():
    P = fixture("SPH-OCT")
    assert [str(piz_cohomology(P, Z, k).answer) for k in range(3)] == ["Z", "0", "Z"]


def test_disconnected_cover_with_torsion_coefficients():
    P = fixture("DISC2")
    assert kww_cohomology(P, Z2, 0).answer == FgAbGroup(0, (2, 2))
    assert kww_cohomology(P, Z2, 1).answer == ZERO


def test_truncation_bound():
    P = fixture("PT")
    with pytest.raises(BoundError):
        piz_cohomology(P, Z, 2, n_max=3)
    with pytest.raises(BoundError):
        tot_cohomology(P, Z, -1)
    with pytest.raises(DiffCechError):
        cohomology_report(P, Z, 0, "sheaf")


@pytest.mark.parametrize("name", ["PT", "DISC2", "CIRC2", "CIRC4"])
def test_routes_agree_on_fixtures(name):
    P = fixture(name)
    for A in (Z, Z2):
        for k in range(3):
            a = piz_cohomology(P, A, k).answer
            assert tot_cohomology(P, A, k).answer == a
            assert kww_cohomology(P, A, k).answer == a


def test_totalization_matches_piz_on_random_presentations():
    coeffs = [Z, Z2, FgAbGroup.parse("Z/6")]
    for seed in range(100):
        P = random_presentation(np.random.default_rng([7, seed]), max_probes=5, max_morphisms=8)
        A = coeffs[seed % 3]
        for k in range(3):
            assert tot_cohomology(P, A, k).answer == piz_cohomology(P, A, k).answer, (seed, k)


def test_compare_circle():
    cmp = compare_theories(fixture("CIRC2"), Z, 2)
    for t in ("PIZ-QX", "KWW", "TOT"):
        assert cmp.table[t] == ["Z", "Z", "0"]
    assert "PIZ-BM" in cmp.table
    assert cmp.text().splitlines()[0].startswith("k  PIZ-QX")
    bm = piz_cohomology(fixture("CIRC2"), Z, 1, route="BM")
    assert any("discrete" in c for c in bm.caveats)


def test_compare_point_agrees():
    cmp = compare_theories(fixture("PT"), Z, 2)
    assert all(cmp.agree)


def test_report_schema_and_stability():
    P = fixture("CIRC2")
    a = tot_cohomology(P, Z, 1).dumps()
    b = tot_cohomology(P, Z, 1).dumps()
    assert a == b
    data = json.loads(a)
    assert {"theory", "degree", "free_rank", "torsion", "caveats", "census"} <= set(data)
    assert (data["theory"], data["free_rank"], data["torsion"]) == ("TOT", 1, [])
    assert str(piz_cohomology(P, Z, 1)) == "H^1 = Z"

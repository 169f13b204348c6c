import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diffcech.abelian import Z
from diffcech.acceptance import golden_phi_psi, phi_psi_report
from diffcech.cohomology import piz_cohomology
from diffcech.errors import MalformedInputError, ResourceCapError
from diffcech.fixtures import BUILDERS, PRESENTATIONS, fixture, write_fixtures
from diffcech.random_models import random_presentation
from diffcech.simplicial import pi0, verify_simplicial_identities
from diffcech.site import (PlotPresentation, augmentation_commutes, bar_construction, build_presentation_from_complex,
                           gauge_monoid, load_presentation, nebula, phi_psi_compare,
                           presentation_from_json, q_resolution, save_presentation,
                           validate_presentation, verify_action)


@pytest.mark.parametrize("name", PRESENTATIONS)
def test_save_load_is_bit_exact(name, tmp_path):
    P = fixture(name)
    path = tmp_path / f"{name}.json"
    save_presentation(P, path)
    first = path.read_bytes()
    save_presentation(load_presentation(path), path)
    assert path.read_bytes() == first


def test_shipped_fixtures_match_builders(tmp_path):
    for path in write_fixtures(tmp_path):
        if path.stem in BUILDERS:
            assert path.read_text(encoding="utf-8") == fixture(path.stem).dumps()


@pytest.mark.parametrize("name", PRESENTATIONS)
def test_fixtures_are_valid(name):
    assert validate_presentation(fixture(name)).ok


def test_corrupted_label_is_reported():
    data = fixture("CIRC2").to_json()
    m = next(m for m in data["maps"] if m["id"] == "i0U")
    m["vertex_map"] = {"0": "1"}
    rep = validate_presentation(presentation_from_json(data, "bad"))
    assert not rep.ok
    assert "i0U" in rep.violations[0] and "labels do not commute" in rep.violations[0]


def test_non_graph_map_is_reported():
    data = {"points": ["a", "b"],
            "probes": [{"id": "E", "vertices": ["a", "b"], "edges": [["a", "b"]],
                        "to_space": {"a": "a", "b": "b"}},
                       {"id": "D", "vertices": ["a", "b"], "edges": [],
                        "to_space": {"a": "a", "b": "b"}}],
            "maps": [{"id": "f", "from": "E", "to": "D", "vertex_map": {"a": "a", "b": "b"}}]}
    rep = validate_presentation(presentation_from_json(data))
    assert any("neither kept nor collapsed" in v for v in rep.violations)


@pytest.mark.parametrize("mutate,message", [
    (lambda d: d["probes"].append(dict(d["probes"][0])), "duplicate probe"),
    (lambda d: d["maps"][0].update({"to": "nowhere"}), "unknown probe"),
    (lambda d: d["probes"][0]["to_space"].update({"0": "zz"}), "unknown points"),
    (lambda d: d["maps"][0]["vertex_map"].clear(), "exactly the vertices"),
    (lambda d: d.pop("probes"), "missing a field"),
])
def test_malformed_presentations(mutate, message):
    data = fixture("CIRC2").to_json()
    mutate(data)
    with pytest.raises(MalformedInputError, match=message):
        presentation_from_json(data)


def test_morphism_cap():
    P = fixture("SPH-OCT")
    with pytest.raises(ResourceCapError):
        PlotPresentation(P.points, P.probes, P.maps, "capped", morphism_cap=10)


@pytest.mark.parametrize("facets,want", [
    ([("a", "b")], ["Z", "0"]),
    ([("a", "b"), ("b", "c"), ("a", "c")], ["Z", "Z"]),
])
def test_star_cover_presentations(facets, want):
    P = build_presentation_from_complex(facets)
    assert validate_presentation(P).ok
    assert [str(piz_cohomology(P, Z, k).answer) for k in range(2)] == want


def test_octahedron_star_cover_census():
    P = fixture("SPH-OCT")
    assert len(P.probes) == 26
    assert len(P.non_identity_morphisms()) == 98 - 26


def test_nebula_censuses():
    for name, verts, comps in (("PT", 1, 1), ("CIRC2", 8, 4), ("CIRC4", 12, 8)):
        B = nebula(fixture(name))
        assert (len(B), B.n_components) == (verts, comps)


def test_q_resolution_examples():
    X = q_resolution(fixture("PT"), 3)
    assert X.sizes == [1, 1, 1, 1]
    X = q_resolution(fixture("CIRC2"), 2)
    assert X.ncomp[0] == 4
    nd = X.nondegenerate_mask(1)
    assert len(set(X.components[1][nd].tolist())) == 4
    X = q_resolution(fixture("DISC2"), 3)
    assert X.sizes == [2, 2, 2, 2] and X.nondegenerate_counts() == [2, 0, 0, 0]
    for name in PRESENTATIONS:
        X = q_resolution(fixture(name), 2)
        assert augmentation_commutes(fixture(name), X)


def test_gauge_monoids():
    assert len(gauge_monoid(fixture("PT"))) == 1
    assert len(gauge_monoid(fixture("DISC2"))) == 1
    M = gauge_monoid(fixture("CIRC2"))
    assert len(M) == 9
    assert verify_action(nebula(fixture("CIRC2")), M) == []
    with pytest.raises(ResourceCapError):
        gauge_monoid(fixture("SPH-OCT"))


def test_bar_construction_examples():
    for name, sizes in (("PT", [1, 1, 1]), ("DISC2", [2, 2, 2])):
        P = fixture(name)
        X = bar_construction(nebula(P), gauge_monoid(P), 2)
        assert X.sizes == sizes and verify_simplicial_identities(X) == []
    P = fixture("CIRC2")
    X = bar_construction(nebula(P), gauge_monoid(P), 2)
    assert X.ncomp[1] == 4 * 9
    assert len(pi0(X)) == 1


def test_phi_psi_verdicts():
    for name in ("PT", "DISC2"):
        assert phi_psi_compare(fixture(name), 3)["iso_all_degrees"]
    rep = phi_psi_compare(fixture("CIRC2"), 3)
    d1 = rep["degrees"][1]
    assert d1["qx_nondegenerate"] == 4 and d1["bm_size"] == 8 * 9
    assert d1["phi_well_defined"] is False


@pytest.mark.parametrize("name", ["PT", "DISC2", "CIRC2"])
def test_phi_psi_golden(name):
    assert phi_psi_report(name, 3) == golden_phi_psi(name)


@given(st.integers(0, 10_000))
def test_random_presentations_are_valid(seed):
    P = random_presentation(np.random.default_rng(seed))
    assert validate_presentation(P).ok
    assert len(P.probes) <= 5 and len(P.non_identity_morphisms()) <= 8
    X = q_resolution(P, 2)
    assert verify_simplicial_identities(X) == []
    assert augmentation_commutes(P, X)
    again = presentation_from_json(json.loads(P.dumps()), P.name)
    assert again.dumps() == P.dumps()

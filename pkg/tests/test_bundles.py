import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffcech.abelian import FgAbGroup
from diffcech.bundles import (BundleModel, FiniteGroup, PlotCocycle, bg_nerve, brute_force_class_count,
                              bundle_from_cover_cocycle, bundle_from_plot_cocycle, classify_bundles,
                              cocycle_from_labels, cocycle_groupoid, cocycle_morphisms, cover_cocycle,
                              cover_presentation, eg_to_bg, enumerate_cocycles, find_bundle_isomorphism,
                              groupoid_for_nerve,
                              load_cocycle, morphism_to_bundle_map, parse_group, plot_cocycle_from_cover,
                              trivial_cocycle, verify_cover_cocycle, verify_plot_cocycle, verify_principal)
from diffcech.cohomology import piz_cohomology
from diffcech.errors import ConsistencyError, MalformedInputError, ResourceCapError
from diffcech.fixtures import fixture
from diffcech.graphs import ProbeGraph
from diffcech.random_models import random_presentation
from diffcech.site import PlotPresentation, Probe, ProbeMap, unglued_points
from diffcech.simplicial import is_k_coskeletal, nerve

Z2, Z3, S3 = FiniteGroup.cyclic(2), FiniteGroup.cyclic(3), FiniteGroup.symmetric(3)


# groups ---------------------------------------------------------------------------

@pytest.mark.parametrize("G", [Z2, Z3, FiniteGroup.cyclic(6), S3])
def test_group_tables(G):
    r = np.arange(G.order)
    assert np.all(G.mul[r, G.inv] == G.unit)
    assert G.is_abelian() == (G.name != "S3")


def test_group_json_round_trip():
    back = FiniteGroup.from_json(S3.to_json())
    assert np.array_equal(back.mul, S3.mul) and back.names == S3.names


@pytest.mark.parametrize("mul, msg", [
    ([[0, 1], [1, 1]], "inverse"),
    ([[0, 1], [1, 2]], "closed"),
    ([[1, 0], [0, 1]], "unit"),
])
def test_bad_group_tables(mul, msg):
    with pytest.raises(MalformedInputError, match=msg):
        FiniteGroup(["e", "a"], mul, 0)


def test_non_associative_table():
    # a Latin square with unit 0 that is not a group
    L = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(MalformedInputError, match="associative"):
        FiniteGroup(list("eabcd"), L, 0)


def test_parse_group(tmp_path):
    assert parse_group("Z3").order == 3
    assert parse_group("z/4").order == 4
    assert parse_group("S3").order == 6
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"elements": ["e", "t"], "unit": "e",
                             "mul": {"e,e": "e", "e,t": "t", "t,e": "t", "t,t": "e"}}))
    G = parse_group(str(f))
    assert G.order == 2 and G.names[G.inv[G.index("t")]] == "t"
    with pytest.raises(MalformedInputError):
        parse_group("Q8")
    with pytest.raises(MalformedInputError, match="incomplete"):
        FiniteGroup.from_json({"elements": ["e", "t"], "unit": "e", "mul": {"e,e": "e"}})


def test_bg_and_eg():
    B = bg_nerve(Z2, 2)
    assert B.sizes[:3] == [1, 2, 4]
    F = eg_to_bg(Z3, 2)
    E, B = F.source, F.target
    elem = B.meta["chains"][1][B.meta["simplex_chain"][1]][:, 0]
    # the arrow a -> b of EG lands on b·a^{-1}
    src, tgt = E.face(1, 1), E.face(1, 0)
    for s in range(E.sizes[1]):
        assert elem[F.maps[1][s]] == Z3.mul[tgt[s], Z3.inv[src[s]]]
    assert not F.verify()


# cocycles ----------------------------------------------------------------------------

def test_trivial_and_twisted_cocycles_on_the_circle():
    P = fixture("CIRC2")
    assert verify_plot_cocycle(P, Z2, trivial_cocycle(P, Z2)).ok
    g = cocycle_from_labels(P, Z2, {"i2V": {"0": "1"}})
    assert verify_plot_cocycle(P, Z2, g).ok
    assert g.to_json()["labels"]["i2V"] == {"0": "1"}


def _chain():
    """C -> B -> A on one point, with the composite C -> A."""
    g = ProbeGraph(("v",), frozenset())
    probes = [Probe(n, g, {"v": "x"}, ()) for n in "ABC"]
    maps = [ProbeMap("cb", "C", "B", {"v": "v"}), ProbeMap("ba", "B", "A", {"v": "v"})]
    return PlotPresentation(["x"], probes, maps, "chain")


def test_composition_law_violation_is_reported():
    P = _chain()
    g = cocycle_from_labels(P, Z2, {"cb": {"0": "1"}}, derive=False)
    rep = verify_plot_cocycle(P, Z2, g)
    assert not rep.ok and rep.violations
    assert verify_plot_cocycle(P, Z2, cocycle_from_labels(P, Z2, {"cb": {"0": "1"}})).ok


def test_vertexwise_labels_are_rejected():
    P = fixture("CIRC2")
    with pytest.raises(MalformedInputError, match="component"):
        cocycle_from_labels(P, Z2, {"i2V": {"2": "1"}})
    with pytest.raises(MalformedInputError, match="unknown map"):
        cocycle_from_labels(P, Z2, {"nope": {"0": "1"}})
    with pytest.raises(MalformedInputError):
        load_cocycle(P, Z2, {"values": {}})


def test_enumeration_cap():
    with pytest.raises(ResourceCapError):
        enumerate_cocycles(fixture("CIRC4"), S3, cap=1000)


# bundles ------------------------------------------------------------------------------

def test_circle_bundle_censuses():
    P = fixture("CIRC2")
    triv = bundle_from_plot_cocycle(P, Z2, trivial_cocycle(P, Z2))
    twist = bundle_from_plot_cocycle(P, Z2, cocycle_from_labels(P, Z2, {"i2V": {"0": "1"}}))
    assert (triv.n_components, twist.n_components) == (2, 1)
    for B in (triv, twist):
        assert len(B) == len(P.points) * 2
        assert verify_principal(P, B).ok
    assert find_bundle_isomorphism(triv, twist) is None


@pytest.mark.parametrize("G", [Z2, Z3, S3])
def test_point_bundle_is_the_group(G):
    P = fixture("PT")
    S, V = enumerate_cocycles(P, G)
    assert len(V) == 1
    B = bundle_from_plot_cocycle(P, G, trivial_cocycle(P, G))
    assert len(B) == G.order and verify_principal(P, B).ok


def test_doubled_fiber_is_caught():
    P = fixture("CIRC2")
    B = bundle_from_plot_cocycle(P, Z2, trivial_cocycle(P, Z2))
    n = len(B)
    # a second free orbit over the first point
    extra = np.array([[n, n + 1], [n + 1, n]])
    bad = BundleModel(Z2, B.points, np.concatenate([B.proj, [0, 0]]),
                      np.concatenate([B.act, extra]), np.concatenate([B.components, [9, 9]]),
                      B.edges, B.names + ["d0", "d1"])
    rep = verify_principal(P, bad)
    assert not rep.ok
    assert "misses part of the fiber product" in rep.violations[0]


def test_every_cocycle_gives_a_principal_bundle_on_fixtures():
    for name, groups in (("PT", (Z2, S3)), ("DISC2", (Z2, Z3)), ("CIRC2", (Z2, Z3)), ("CIRC4", (Z2,))):
        P = fixture(name)
        for G in groups:
            S, V = enumerate_cocycles(P, G)
            for row in V:
                B = bundle_from_plot_cocycle(P, G, PlotCocycle(S, row))
                assert verify_principal(P, B).ok
                assert np.all(np.bincount(B.proj) == G.order)


# cover cocycles -----------------------------------------------------------------------

CYCLE = ProbeGraph(("0", "1", "2", "3"), frozenset({("0", "1"), ("1", "2"), ("2", "3"), ("3", "0")}))


def test_one_patch_cover_is_trivial():
    c = cover_cocycle(CYCLE, [list(CYCLE.vertices)], S3)
    B = bundle_from_cover_cocycle(c, S3)
    assert len(B) == 4 * 6 and B.n_components == 6


@pytest.mark.parametrize("twist, comps", [(True, 1), (False, 2)])
def test_two_patch_circle(twist, comps):
    values = {"0,1": {"1": "1"}} if twist else None
    c = cover_cocycle(CYCLE, [["0", "1", "2"], ["2", "3", "0"]], Z2, values)
    assert verify_cover_cocycle(c, Z2).ok
    B = bundle_from_cover_cocycle(c, Z2)
    assert B.n_components == comps
    P = cover_presentation(c)
    B2 = bundle_from_plot_cocycle(P, Z2, plot_cocycle_from_cover(c, Z2, P))
    assert verify_principal(P, B2).ok
    assert find_bundle_isomorphism(B, B2) is not None


def test_cover_cocycle_violation_refused():
    c = cover_cocycle(CYCLE, [["0", "1"], ["1", "2"], ["0", "1", "2", "3"]], Z3,
                      {"0,1": {"0": "1"}})
    assert not verify_cover_cocycle(c, Z3).ok
    with pytest.raises(ConsistencyError):
        bundle_from_cover_cocycle(c, Z3)


# groupoid and classification ------------------------------------------------------------

def test_point_groupoid():
    C = cocycle_groupoid(fixture("PT"), S3)
    assert len(C) == 1 and C.n_orbits == 1
    assert len(C.stabilizer(0)) == 6


@pytest.mark.parametrize("G, n_obj, n_cls", [(Z2, 16, 2), (Z3, 81, 3)])
def test_circle_groupoid(G, n_obj, n_cls):
    C = cocycle_groupoid(fixture("CIRC2"), G)
    assert (len(C), C.n_orbits) == (n_obj, n_cls)
    mode, Gd = groupoid_for_nerve(C, 4)
    assert mode == ("full" if G.order == 2 else "skeleton")
    assert is_k_coskeletal(nerve(Gd, 4), 2, 4)


def test_morphism_to_bundle_map():
    P = fixture("CIRC2")
    C = cocycle_groupoid(P, Z2)
    S = C.space
    g = trivial_cocycle(P, Z2, S)
    h = np.full(S.n_gauge_slots, Z2.unit)
    h[S.gslots(P.probe_index["U"])] = 1
    g2 = type(g)(S, S.act(h.reshape(1, -1), g.values.reshape(1, -1))[0])
    M = morphism_to_bundle_map(P, Z2, g, g2, h)
    assert sorted(M.table.tolist()) == list(range(len(M.source)))
    assert not np.array_equal(g.values, g2.values)
    ident = morphism_to_bundle_map(P, Z2, g, g, np.full(S.n_gauge_slots, Z2.unit))
    assert np.array_equal(ident.table, np.arange(len(ident.source)))
    with pytest.raises(ConsistencyError):
        morphism_to_bundle_map(P, Z2, g, g, h)


def test_no_morphisms_between_classes():
    P = fixture("CIRC2")
    triv = trivial_cocycle(P, Z2)
    twist = cocycle_from_labels(P, Z2, {"i2V": {"0": "1"}}, space=triv.space)
    assert len(cocycle_morphisms(triv, twist)) == 0
    assert len(cocycle_morphisms(triv, triv)) == 2  # the constant gauge elements


@pytest.mark.parametrize("name, G, orders", [
    ("CIRC2", Z2, [2, 2]), ("CIRC2", Z3, [3, 3, 3]), ("CIRC2", S3, [2, 3, 6]),
    ("DISC2", S3, [36]), ("PT", Z3, [3]),
])
def test_classification(name, G, orders):
    classes = classify_bundles(fixture(name), G)
    assert sorted(c.gauge_order for c in classes) == orders
    assert all(c.principal for c in classes)
    count, stabs = brute_force_class_count(fixture(name), G)
    assert count == len(classes) and sorted(stabs) == orders


def test_gauge_group_structure():
    (c,) = classify_bundles(fixture("DISC2"), Z3)
    assert c.gauge_group == FgAbGroup(0, (3, 3))
    assert {c.gauge_group is None for c in classify_bundles(fixture("CIRC2"), S3)} == {True, False}


@pytest.mark.parametrize("name", ["PT", "DISC2", "CIRC2", "CIRC4"])
@pytest.mark.parametrize("n", [2, 3])
def test_classes_count_first_cohomology(name, n):
    P = fixture(name)
    h1 = piz_cohomology(P, FgAbGroup.parse(f"Z/{n}"), 1).answer
    assert len(classify_bundles(P, FiniteGroup.cyclic(n))) == h1.order()


def _small_random(seed):
    return random_presentation(np.random.default_rng(seed), max_probes=4, max_morphisms=5)


@settings(max_examples=30)
@given(seed=st.integers(0, 10_000), n=st.sampled_from([2, 3]))
def test_classification_matches_brute_force(seed, n):
    P = _small_random(seed)
    G = FiniteGroup.cyclic(n)
    classes = classify_bundles(P, G)
    try:
        count, stabs = brute_force_class_count(P, G)
    except ResourceCapError:
        return
    assert count == len(classes)
    assert sorted(stabs) == sorted(c.gauge_order for c in classes)


@settings(max_examples=30)
@given(seed=st.integers(0, 10_000), n=st.sampled_from([2, 3]))
def test_classes_count_first_cohomology_on_random_presentations(seed, n):
    P = _small_random(seed)
    classes = classify_bundles(P, FiniteGroup.cyclic(n))
    assert len(classes) == piz_cohomology(P, FgAbGroup.parse(f"Z/{n}"), 1).answer.order()
    # the least cocycle is the trivial one; it glues to X x G once fibers are connected
    assert not classes[0].representative.values.any()
    if not unglued_points(P):
        assert classes[0].principal
    for c in classes:
        assert c.principal or c.note.startswith("not principal")


def test_brute_force_cap():
    with pytest.raises(ResourceCapError):
        brute_force_class_count(fixture("CIRC4"), S3, cap=100)

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diffcech.abelian import FgAbGroup, Z
from diffcech.dold_kan import em_object, wbar
from diffcech.fixtures import fixture
from diffcech.random_models import random_preorder, random_presentation, random_simplicial_set
from diffcech.simplicial import (FinCategory, cech_nerve, constant_simplicial_group,
                                 constant_simplicial_set, free_abelian, functions_cosimplicial,
                                 is_k_coskeletal, moore_homotopy, nerve, one_object_category, pi0,
                                 verify_simplicial_identities)
from diffcech.site import bar_construction, cech_of_nebula, gauge_monoid, nebula, q_resolution


def z2():
    return one_object_category([0, 1], np.array([[0, 1], [1, 0]]), 0, groupoid=True)


def discrete(n):
    return FinCategory(list(range(n)), [f"id{i}" for i in range(n)], range(n), range(n), range(n),
                       {(i, i): i for i in range(n)})


def test_nerve_of_z2_counts():
    X = nerve(z2(), 3)
    assert X.sizes == [1, 2, 4, 8]
    # only the chains avoiding the identity are nondegenerate
    assert X.nondegenerate_counts() == [1, 1, 1, 1]
    assert verify_simplicial_identities(X) == []


def test_nerve_of_trivial_and_discrete():
    assert verify_simplicial_identities(nerve(discrete(1), 3)) == []
    X = nerve(discrete(3), 2)
    assert X.nondegenerate_counts() == [3, 0, 0]


def test_nerve_of_circ2_probe_category():
    P = fixture("CIRC2")
    X = nerve(P.category, 2)
    assert X.sizes[0] == 4
    assert X.nondegenerate_counts() == [4, 4, 0]
    assert len(pi0(X)) == 1


def test_corrupted_face_table_is_named():
    X = q_resolution(fixture("CIRC2"), 2)
    x = int(np.nonzero(X.nondegenerate_mask(1))[0][0])
    y = int(np.nonzero(X.faces[2][0] == x)[0][0])
    X.faces[2][2][y] = (X.faces[2][2][y] + 1) % X.sizes[1]
    bad = verify_simplicial_identities(X)
    assert bad and any("d_" in str(v) for v in bad)
    assert any(v.identity in ("d_0d_2 = d_1d_0", "d_1d_2 = d_1d_1") for v in bad)


def test_identities_on_fixture_models():
    for name in ("PT", "DISC2", "CIRC2", "CIRC4"):
        P = fixture(name)
        for X in (q_resolution(P, 3), cech_of_nebula(P, 3), bar_construction(nebula(P), gauge_monoid(P), 2)):
            assert verify_simplicial_identities(X) == [], (name, X.name)


@given(st.integers(0, 10_000))
def test_random_simplicial_sets_satisfy_identities(seed):
    X = random_simplicial_set(np.random.default_rng(seed), 3)
    assert verify_simplicial_identities(X) == []


@given(st.integers(0, 10_000))
def test_preorder_nerves_are_2_coskeletal(seed):
    rng = np.random.default_rng(seed)
    C = random_preorder(rng, int(rng.integers(1, 5)))
    assert is_k_coskeletal(nerve(C, 4), 2, 4)
    # a preorder has at most one arrow between two objects, so even k = 1 holds
    assert is_k_coskeletal(nerve(C, 4), 1, 4)


def test_group_nerve_is_not_1_coskeletal():
    r = is_k_coskeletal(nerve(z2(), 4), 1, 4)
    assert not r and r.witness
    assert is_k_coskeletal(nerve(z2(), 4), 2, 4)


def test_constant_set_coskeletality():
    assert is_k_coskeletal(constant_simplicial_set(1, 3), 0, 3)
    # with two points, the boundary (a, b) has no filler
    r = is_k_coskeletal(constant_simplicial_set(2, 3), 0, 3)
    assert not r and "no filler" in r.witness


def test_cech_of_identity_is_constant():
    X = cech_nerve(np.arange(3), 3, 3)
    assert X.sizes == [3, 3, 3, 3]
    assert all((X.faces[k] == np.arange(3)).all() for k in range(1, 4))


def test_cech_censuses():
    P = fixture("CIRC2")
    assert cech_of_nebula(P, 2).ncomp[1] == 16
    two_arc = P.restrict(["U", "V"])
    X = cech_of_nebula(two_arc, 2)
    # U×U, V×V and the two-component intersections U×V, V×U
    assert X.ncomp[1] == 6


def test_pi0_examples():
    assert len(pi0(q_resolution(fixture("DISC2"), 1))) == 2
    P = fixture("PT")
    assert len(pi0(bar_construction(nebula(P), gauge_monoid(P), 1))) == 1


def test_pi0_of_resolutions_agree_on_fixtures():
    for name in ("PT", "DISC2", "CIRC2", "CIRC4", "SPH-OCT"):
        P = fixture(name)
        assert len(pi0(q_resolution(P, 1))) == len(pi0(cech_of_nebula(P, 1))), name


@given(st.integers(0, 10_000))
def test_cech_pi0_is_coarser(seed):
    # every QX 1-simplex joins two same-label vertices, so Čech glues at least as much;
    # without maps between overlapping probes it glues strictly more
    P = random_presentation(np.random.default_rng(seed), max_probes=4, max_morphisms=6)
    a = pi0(q_resolution(P, 1)).labels
    Y = cech_of_nebula(P, 1)
    # Čech vertices come fiber by fiber; put them back in nebula order
    b = np.empty(Y.sizes[0], dtype=np.int64)
    b[Y.meta["tuples"][0][:, 0]] = pi0(Y).labels
    assert len(a) == len(b)
    for cls in set(a.tolist()):
        assert len(set(b[a == cls].tolist())) == 1


def test_moore_homotopy_examples():
    pi = moore_homotopy(em_object(Z, 2, 4))
    assert [str(g) for g in pi.groups[:3]] == ["0", "0", "Z"]
    A = FgAbGroup.cyclic(5)
    pi = moore_homotopy(constant_simplicial_group(A, 3))
    assert pi[0] == A and all(g.is_zero for g in pi.groups[1:])
    pi = moore_homotopy(wbar(constant_simplicial_group(FgAbGroup.cyclic(2), 3)))
    assert pi[0].is_zero and pi[1] == FgAbGroup.cyclic(2) and pi[2].is_zero
    assert pi.unreliable == (3,)


def test_free_abelian_nerve_homotopy_is_homology():
    # π_* Z[BZ/2] = H_*(RP^∞) = Z, Z/2, 0, Z/2 in low degrees
    pi = moore_homotopy(free_abelian(nerve(z2(), 5)))
    assert [str(g) for g in pi.groups[:4]] == ["Z", "Z/2", "0", "Z/2"]


def test_functions_cosimplicial_examples():
    assert functions_cosimplicial(q_resolution(fixture("PT"), 2), Z, 2).ranks == [1, 1, 1]
    assert functions_cosimplicial(q_resolution(fixture("DISC2"), 2), Z, 2).ranks == [2, 2, 2]
    F = functions_cosimplicial(q_resolution(fixture("CIRC2"), 2), Z, 2)
    assert F.ranks[0] == 4

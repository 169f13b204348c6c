import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffcech.abelian import FgAbGroup, Z
from diffcech.complexes import concentrated
from diffcech.dold_kan import (alternating_coface, delooping_shift_iso, em_object, gamma, normalized_chain,
                               normalized_coface, quotient_coface, round_trip_iso, surjections, wbar,
                               wbar_iter)
from diffcech.errors import BoundError, ScopeError
from diffcech.fixtures import fixture
from diffcech.random_models import random_chain_complex, random_cosimplicial, random_simplicial_set
from diffcech.simplicial import (constant_simplicial_group, constant_simplicial_set, free_abelian,
                                 functions_cosimplicial, moore_homotopy, nerve, one_object_category)
from diffcech.site import q_resolution

Z2, Z4 = FgAbGroup.cyclic(2), FgAbGroup.cyclic(4)


def test_surjection_counts():
    assert len(surjections(2, 1)) == 2
    assert len(surjections(3, 2)) == 3
    assert len(surjections(4, 2)) == 6  # C(4, 2)


def test_gamma_examples():
    G = gamma(concentrated(Z, 0), 3)
    assert G.ranks == [1, 1, 1, 1]
    assert gamma(concentrated(Z, 1), 3).ranks[2] == 2
    assert gamma(concentrated(Z, 2), 3).ranks[3] == 3


def test_normalized_chain_examples():
    N = normalized_chain(constant_simplicial_group(Z, 3))
    assert [N.rank(n) for n in range(4)] == [1, 0, 0, 0]
    N = normalized_chain(gamma(concentrated(Z, 1), 3))
    assert [N.rank(n) for n in range(4)] == [0, 1, 0, 0]
    z2 = one_object_category([0, 1], np.array([[0, 1], [1, 0]]), 0, groupoid=True)
    X = nerve(z2, 4)
    N = normalized_chain(free_abelian(X))
    assert [N.rank(n) for n in range(5)] == X.nondegenerate_counts()


@settings(max_examples=30)
@given(st.integers(0, 100_000))
def test_round_trip_iso(seed):
    C = random_chain_complex(np.random.default_rng(seed), top=4)
    phi = round_trip_iso(C)
    assert all(phi[n].rows == C.rank(n) for n in phi)


@settings(max_examples=30)
@given(st.integers(0, 100_000))
def test_gamma_homotopy_is_homology(seed):
    C = random_chain_complex(np.random.default_rng(seed), top=2)
    pi = moore_homotopy(gamma(C, 3))
    assert [pi[n] for n in range(3)] == [C.homology(n) for n in range(3)]


@pytest.mark.parametrize("A,k", [(Z, 0), (Z2, 1), (Z + Z4, 2)])
def test_em_object_homotopy(A, k):
    pi = moore_homotopy(em_object(A, k, k + 3))
    assert [pi[n] for n in range(k + 2)] == [FgAbGroup.zero()] * k + [A, FgAbGroup.zero()]


def test_em_object_needs_room():
    with pytest.raises(BoundError):
        em_object(Z, 2, 3)


def test_wbar_examples():
    W = wbar(constant_simplicial_group(FgAbGroup.zero(), 3))
    assert all(g.is_zero for g in moore_homotopy(W))
    W = wbar(constant_simplicial_group(Z2, 3))
    assert W.ranks == [0, 1, 2, 3, 4]
    N = normalized_chain(W)
    assert [N.rank(n) for n in range(5)] == [0, 1, 0, 0, 0]
    pi = moore_homotopy(wbar(em_object(Z, 1, 4)))
    assert [str(g) for g in pi.groups[:4]] == ["0", "0", "Z", "0"]


@pytest.mark.parametrize("A", [Z, Z2, FgAbGroup.cyclic(6), Z + Z4])
@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_wbar_iter_is_em_object(A, k):
    W, maps = wbar_iter(A, k, k + 2, with_iso=True)
    assert [m.rows for m in maps.values()] == W.ranks


def test_wbar_scope():
    with pytest.raises(ScopeError):
        wbar("not a group")


@settings(max_examples=25)
@given(st.integers(0, 100_000))
def test_delooping_shift_on_free_groups(seed):
    X = random_simplicial_set(np.random.default_rng(seed), 3)
    delooping_shift_iso(free_abelian(X))


def test_constant_cosimplicial():
    F = functions_cosimplicial(constant_simplicial_set(1, 3, [0]), Z2, 3)
    C, N = alternating_coface(F), normalized_coface(F)
    assert C.cohomology(0) == Z2 and all(C.cohomology(n).is_zero for n in (1, 2))
    assert [N.rank(n) for n in range(4)] == [1, 0, 0, 0]
    F0 = functions_cosimplicial(constant_simplicial_set(1, 3, [0]), FgAbGroup.zero(), 3)
    assert all(alternating_coface(F0).cohomology(n).is_zero for n in range(3))


@pytest.mark.parametrize("name,want", [("CIRC2", ["Z", "Z", "0"]), ("CIRC4", ["Z", "Z", "0"]),
                                       ("SPH-OCT", ["Z", "0", "Z"])])
def test_coface_complexes_on_fixtures(name, want):
    F = functions_cosimplicial(q_resolution(fixture(name), 3), Z, 3)
    C, N = alternating_coface(F), normalized_coface(F)
    assert [str(C.cohomology(k)) for k in range(3)] == want
    assert [str(N.cohomology(k)) for k in range(3)] == want


@settings(max_examples=30)
@given(st.integers(0, 100_000), st.sampled_from([Z, Z2, FgAbGroup.cyclic(6), Z + Z4]))
def test_normalized_quotient_and_alternating_agree(seed, A):
    F, _ = random_cosimplicial(np.random.default_rng(seed), 4, A)
    N = normalized_coface(F, cross_check=False)
    Q = quotient_coface(F)
    C = alternating_coface(F)
    for k in range(4):
        assert N.cohomology(k) == Q.cohomology(k) == C.cohomology(k)

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diffcech.abelian import FgAbGroup, Z
from diffcech.complexes import (STATS, ChainComplex, CochainComplex, DoubleComplex, concentrated,
                                expect_rejections, shift, total_cochain_complex)
from diffcech.errors import MalformedComplexError
from diffcech.linalg import IntMatrix
from diffcech.oracles import boundary_rows, simplices_of
from diffcech.random_models import random_chain_complex


def test_multiplication_by_two():
    C = ChainComplex({0: 1, 1: 1}, {1: IntMatrix.from_dense([[2]], 1)})
    assert C.homology(0) == FgAbGroup.cyclic(2)
    assert C.homology(1).is_zero


def test_zero_complex():
    C = ChainComplex({0: 0, 1: 0, 2: 0})
    assert all(C.homology(n).is_zero for n in range(3))


def test_three_cycle_graph():
    simp = simplices_of([(0, 1), (1, 2), (0, 2)])
    d1 = IntMatrix.from_dense(boundary_rows(simp, 1), 3)
    C = ChainComplex({0: 3, 1: 3}, {1: d1})
    assert C.homology(0) == Z and C.homology(1) == Z


def test_shift_examples():
    S = shift(concentrated(Z, 0), 1)
    assert S.ranks == {1: 1} and S.homology(1) == Z and S.homology(0).is_zero
    C = ChainComplex({0: 1, 1: 1}, {1: IntMatrix.from_dense([[3]], 1)})
    assert shift(C, 0) == C
    assert shift(shift(C, 1), -1) == C


def test_nonzero_square_is_rejected():
    d1 = IntMatrix.from_dense([[1]], 1)
    d2 = IntMatrix.from_dense([[1]], 1)
    before = STATS["failures"]
    with expect_rejections(), pytest.raises(MalformedComplexError, match="nonzero"):
        ChainComplex({0: 1, 1: 1, 2: 1}, {1: d1, 2: d2})
    assert STATS["failures"] == before


def test_shape_mismatch_is_rejected():
    with pytest.raises(MalformedComplexError, match="shape"):
        ChainComplex({0: 2, 1: 1}, {1: IntMatrix.from_dense([[1]], 1)})


@given(st.integers(0, 10_000), st.sampled_from([2, 3, 4, 6]))
def test_universal_coefficients(seed, m):
    rng = np.random.default_rng(seed)
    C = random_chain_complex(rng, top=3)
    Cm = C.with_coeff(FgAbGroup.cyclic(m))
    for n in range(4):
        want = C.homology(n).tensor_cyclic(m)
        if n >= 1:
            want = want + C.homology(n - 1).tor_cyclic(m)
        assert Cm.homology(n) == want


@given(st.integers(0, 10_000))
def test_cochain_dual_of_chain(seed):
    rng = np.random.default_rng(seed)
    C = random_chain_complex(rng, top=3)
    D = CochainComplex(dict(C.ranks), {n - 1: m.T for n, m in C.d.items()})
    for n in range(4):
        # H^n(Hom(C, Z)) = Hom(H_n, Z) + Ext(H_{n-1}, Z)
        free = C.homology(n).free_rank
        tors = C.homology(n - 1).torsion if n >= 1 else ()
        assert D.cohomology(n) == FgAbGroup(free, tors)


def test_total_of_single_cell():
    D = DoubleComplex({(0, 0): 2}, coeff=Z)
    T = total_cochain_complex(D)
    assert T.rank(0) == 2 and T.cohomology(0) == FgAbGroup(2)


def test_total_of_one_row_is_that_row():
    d = IntMatrix.from_dense([[1], [-1]], 1)
    D = DoubleComplex({(0, 0): 1, (1, 0): 2}, {(0, 0): d})
    T = total_cochain_complex(D)
    row = CochainComplex({0: 1, 1: 2}, {0: d})
    assert [T.cohomology(n) for n in range(2)] == [row.cohomology(n) for n in range(2)]


def test_total_complex_signs_make_a_complex():
    # the square ℤ -> ℤ (both ways identity) needs the sign to anticommute
    I = IntMatrix.identity(1)
    D = DoubleComplex({(0, 1): 1, (1, 1): 1, (0, 0): 1, (1, 0): 1},
                      {(0, 1): I, (0, 0): I}, {(0, 1): I, (1, 1): I})
    T = total_cochain_complex(D)
    assert all(T.cohomology(n).is_zero for n in (-1, 0, 1))

from itertools import permutations
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diffcech.abelian import FgAbGroup, Z, functions_group
from diffcech.linalg import (IntMatrix, determinant, elementary_divisors, hermite_basis, kernel_basis,
                             rank, smith_normal_form, solve_in_basis)
from diffcech.oracles import sympy_invariant_factors


def matrices(max_dim=6, bound=100):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                               min_size=m, max_size=m)))


def leibniz_det(rows):
    n = len(rows)
    total = 0
    for p in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] > p[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= rows[i][p[i]]
        total += term
    return total


@given(matrices())
def test_snf_certificate(rows):
    M = IntMatrix.from_dense(rows, len(rows[0]))
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [D.entry(i, i) for i in range(min(D.shape))]
    nz = [d for d in diag if d]
    assert diag[:len(nz)] == nz and all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert D.nnz() == len(nz)


@given(matrices(max_dim=5, bound=30))
def test_invariant_factors_match_reference(rows):
    M = IntMatrix.from_dense(rows, len(rows[0]))
    assert sorted(elementary_divisors(M)) == sympy_invariant_factors(rows, len(rows), len(rows[0]))


@given(matrices(max_dim=4, bound=20))
def test_determinant_against_leibniz(rows):
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    assert determinant(IntMatrix.from_dense(sq, n)) == leibniz_det(sq)


@given(matrices(max_dim=6, bound=10))
def test_kernel_basis_is_saturated_kernel(rows):
    M = IntMatrix.from_dense(rows, len(rows[0]))
    K = kernel_basis(M)
    assert (M @ K).is_zero()
    assert K.cols == M.cols - rank(M)
    # a saturated lattice has trivial elementary divisors
    assert all(d == 1 for d in elementary_divisors(K))


def test_snf_examples():
    U, D, V = smith_normal_form(IntMatrix.identity(3))
    assert D == IntMatrix.identity(3)
    _, D, _ = smith_normal_form(IntMatrix.from_dense([[2, 4], [6, 8]], 2))
    assert [D.entry(0, 0), D.entry(1, 1)] == [2, 4]
    _, D, _ = smith_normal_form(IntMatrix.zeros(2, 3))
    assert D.is_zero() and D.shape == (2, 3)


def test_solve_in_basis_roundtrip(rng):
    B = IntMatrix.from_dense([[1, 0], [2, 1], [0, 3]], 2)
    coords = IntMatrix.from_dense([[1, -2, 5], [4, 0, 1]], 3)
    assert solve_in_basis(B, B @ coords) == coords
    with pytest.raises(ValueError):
        solve_in_basis(B, IntMatrix.from_dense([[0], [1], [0]], 1))


def test_hermite_basis_spans_same_lattice():
    gens = IntMatrix.from_dense([[2, 4, 6], [0, 3, 3], [0, 0, 0]], 3)
    H = hermite_basis(gens)
    assert H.cols == rank(gens)
    # each generating set lies in the lattice spanned by the other
    solve_in_basis(H, gens)
    assert H == gens @ solve_in_basis_any(gens, H)


def solve_in_basis_any(gens, targets):
    """Integer coefficients writing targets over possibly dependent generators."""
    U, D, V = smith_normal_form(gens)
    y = U @ targets
    rows = {}
    for i in range(min(D.shape)):
        d = D.entry(i, i)
        if d:
            rows[i] = [c // d for c in y.to_dense()[i]]
            assert all(c % d == 0 for c in y.to_dense()[i])
    dense = [rows.get(i, [0] * targets.cols) for i in range(gens.cols)]
    return V @ IntMatrix.from_dense(dense, targets.cols)


def test_sparse_and_machine_products_agree(rng):
    a = rng.integers(-3, 4, (450, 30))
    b = rng.integers(-3, 4, (30, 20))
    A, B = IntMatrix.from_dense(a.tolist(), 30), IntMatrix.from_dense(b.tolist(), 20)
    assert (A @ B).to_dense() == (a @ b).tolist()


@given(st.lists(st.integers(2, 30), max_size=5), st.integers(0, 3))
def test_fgab_normal_form(orders, free):
    A = FgAbGroup(free, tuple(orders))
    t = A.torsion
    assert all(b % a == 0 for a, b in zip(t, t[1:]))
    total = 1
    for o in orders:
        total *= o
    if free:
        assert A.order() is None
    else:
        assert A.order() == total
    assert FgAbGroup.parse(str(A)) == A


def test_fgab_parse_and_print():
    assert str(FgAbGroup.parse("Z^2 + Z/4")) == "Z^2 + Z/4"
    assert FgAbGroup.parse("(Z/2)^3") == FgAbGroup(0, (2, 2, 2))
    assert FgAbGroup.parse("Z/2 + Z/3") == FgAbGroup(0, (6,))
    assert FgAbGroup.parse("0").is_zero
    assert functions_group(0, Z).is_zero
    assert functions_group(1, Z) == Z
    assert functions_group(3, FgAbGroup.cyclic(2)) == FgAbGroup(0, (2, 2, 2))


@given(st.integers(1, 40), st.integers(1, 40))
def test_tensor_and_tor_of_cyclics(m, n):
    A = FgAbGroup.cyclic(m)
    g = gcd(m, n)
    assert A.tensor(FgAbGroup.cyclic(n)) == FgAbGroup.cyclic(g)
    assert A.tor(FgAbGroup.cyclic(n)) == FgAbGroup.cyclic(g)

"""Reference computations that share no code with the engine: integer Smith
forms come from sympy, and simplicial cohomology is read off the oriented
boundary matrices of an abstract simplicial complex."""

from __future__ import annotations

from itertools import combinations

from .abelian import FgAbGroup


def sympy_invariant_factors(rows: list[list[int]], n_rows: int, n_cols: int) -> list[int]:
    """Nonzero diagonal of the Smith form, as positive integers in order."""
    if n_rows == 0 or n_cols == 0:
        return []
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    D = smith_normal_form(Matrix(rows), domain=ZZ)
    out = [abs(int(D[i, i])) for i in range(min(n_rows, n_cols)) if D[i, i] != 0]
    return sorted(out)


def simplices_of(facets) -> dict[int, list[tuple]]:
    """All faces of the complex generated by the facets, sorted per dimension."""
    out: dict[int, set] = {}
    for f in facets:
        f = tuple(sorted(f))
        for d in range(len(f)):
            for s in combinations(f, d + 1):
                out.setdefault(d, set()).add(s)
    return {d: sorted(v) for d, v in out.items()}


def boundary_rows(simp: dict, k: int) -> list[list[int]]:
    """∂_k : C_k -> C_{k-1} as a dense row list."""
    lower = {s: i for i, s in enumerate(simp.get(k - 1, []))}
    upper = simp.get(k, [])
    rows = [[0] * len(upper) for _ in lower]
    for j, s in enumerate(upper):
        for i in range(len(s)):
            rows[lower[s[:i] + s[i + 1:]]][j] += (-1) ** i
    return rows


def simplicial_cohomology(facets, k: int) -> FgAbGroup:
    """H^k(K; ℤ) of the simplicial complex with the given facets.

    H^k = ker ∂_{k+1}^T / im ∂_k^T, so its free rank is
    n_k - rank ∂_{k+1} - rank ∂_k and its torsion is that of coker ∂_k^T,
    i.e. the invariant factors of ∂_k.
    """
    simp = simplices_of(facets)
    n = {d: len(v) for d, v in simp.items()}

    def factors(d):
        if d <= 0 or n.get(d, 0) == 0 or n.get(d - 1, 0) == 0:
            return []
        return sympy_invariant_factors(boundary_rows(simp, d), n[d - 1], n[d])

    below, above = factors(k), factors(k + 1)
    free = n.get(k, 0) - len(above) - len(below)
    return FgAbGroup(free, tuple(v for v in below if v > 1))


CYCLE4 = [(0, 1), (1, 2), (2, 3), (0, 3)]

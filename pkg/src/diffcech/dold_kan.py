"""Normalized chains N, the inverse Γ, coface complexes, Eilenberg–MacLane
objects and the W̄ delooping, all on degreewise free objects with integral
structure maps (coefficients ride along, see ``complexes``).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .abelian import FgAbGroup, Z
from .complexes import ChainComplex, CochainComplex, concentrated, shift
from .errors import BoundError, ConventionError, MalformedComplexError, ScopeError
from .linalg import IntMatrix, elementary_divisors, kernel_basis, smith_normal_form, solve_in_basis
from .simplicial import (CosimplicialAbGroup, SimplicialAbGroup, constant_simplicial_group,
                         moore_complex)

# largest degreewise rank at which the slower cross-check routes run by default
CROSS_CHECK_LIMIT = 250


# monotone maps ------------------------------------------------------------------

@lru_cache(maxsize=None)
def surjections(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Order-preserving surjections [n] ->> [m] as value tuples, lexicographic."""
    if m > n or m < 0:
        return ()
    out = []
    for jumps in combinations(range(1, n + 1), m):
        vals, cur, js = [], 0, set(jumps)
        for j in range(n + 1):
            if j in js:
                cur += 1
            vals.append(cur)
        out.append(tuple(vals))
    return tuple(out)


def coface_map(n: int, i: int) -> tuple[int, ...]:
    """δ^i: [n-1] -> [n], the injection missing i."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy_map(n: int, i: int) -> tuple[int, ...]:
    """σ^i: [n+1] -> [n], the surjection hitting i twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def epi_mono(f: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """f = ι ∘ τ with τ surjective onto [r] and ι injective, as value tuples."""
    image = sorted(set(f))
    pos = {v: t for t, v in enumerate(image)}
    return tuple(pos[v] for v in f), tuple(image)


def compose(g: tuple[int, ...], f: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(g[v] for v in f)


# N ------------------------------------------------------------------------------

def normalized_chain(A: SimplicialAbGroup, n_max: int | None = None,
                     cross_check: bool | None = None) -> ChainComplex:
    """Moore complex ∩_{i>=1} ker d_i with differential d_0.

    The degenerate-quotient description is checked against it: in each degree
    the kernel basis together with the degenerate images must span the whole
    lattice with ranks adding up (A_n = N_n ⊕ D_n).
    """
    if n_max is not None:
        if n_max > A.n_max:
            raise BoundError(f"simplicial group truncated at {A.n_max}, asked for degree {n_max}")
        A = A.truncate(n_max)
    C, bases = moore_complex(A)
    if cross_check is None:
        cross_check = max(A.ranks) <= CROSS_CHECK_LIMIT
    if cross_check:
        for n in range(1, A.n_max + 1):
            gens = IntMatrix.hstack(list(A.degens[n - 1]))
            rank_d = len(elementary_divisors(gens))
            both = IntMatrix.hstack([bases[n], gens])
            div = elementary_divisors(both)
            if bases[n].cols + rank_d != A.ranks[n] or len(div) != A.ranks[n] or any(d != 1 for d in div):
                raise MalformedComplexError(
                    f"Moore kernel and degenerate quotient disagree in degree {n}")
    C.moore_bases = bases
    return C


# Γ ------------------------------------------------------------------------------

class _GammaLayout:
    def __init__(self, C: ChainComplex, n_max: int):
        self.C = C
        self.blocks = []  # per degree: list of (σ, m, offset)
        self.ranks = []
        for n in range(n_max + 1):
            off, blocks = 0, []
            for m in range(n + 1):
                r = C.rank(m)
                if r == 0:
                    continue
                for s in surjections(n, m):
                    blocks.append((s, m, off))
                    off += r
            self.blocks.append(blocks)
            self.ranks.append(off)
        self.where = [{s: (m, off) for s, m, off in b} for b in self.blocks]

    def operator(self, theta: tuple[int, ...], n_src: int, n_tgt: int) -> IntMatrix:
        """θ^*: Γ_{n_src} -> Γ_{n_tgt} for θ: [n_tgt] -> [n_src]."""
        entries = []
        for s, m, off in self.blocks[n_src]:
            tau, iota = epi_mono(compose(s, theta))
            r = len(iota) - 1
            if r == m:
                mat = IntMatrix.identity(self.C.rank(m))
            elif r == m - 1 and iota == tuple(range(1, m + 1)):
                mat = self.C.diff(m)
            else:
                continue
            if tau not in self.where[n_tgt]:
                continue  # C_r = 0
            _, toff = self.where[n_tgt][tau]
            for i, row in mat.nonzero_rows():
                for j, v in row.items():
                    entries.append((toff + i, off + j, v))
        return IntMatrix.from_entries(self.ranks[n_tgt], self.ranks[n_src], entries)


def gamma(C: ChainComplex, n_max: int) -> SimplicialAbGroup:
    """Γ(C): degree n is ⊕ over surjections [n] ->> [m] of C_m."""
    lo, _ = C.bounds
    if lo < 0:
        raise ValueError("gamma needs a complex concentrated in non-negative degrees")
    L = _GammaLayout(C, n_max)
    faces = [None] + [[L.operator(coface_map(n, i), n, n - 1) for i in range(n + 1)]
                      for n in range(1, n_max + 1)]
    degens = [[L.operator(codegeneracy_map(n, i), n, n + 1) for i in range(n + 1)]
              for n in range(n_max)]
    G = SimplicialAbGroup(L.ranks, faces, degens, C.coeff, name="Gamma")
    # the identity summand of each degree is the canonical copy of C inside N Γ(C)
    pref = {}
    for n in range(n_max + 1):
        ident = tuple(range(n + 1))
        r = C.rank(n)
        off = L.where[n][ident][1] if ident in L.where[n] else 0
        pref[n] = IntMatrix.from_entries(L.ranks[n], r, ((off + j, j, 1) for j in range(r)))
    G.preferred_moore = pref
    G.layout = L
    return G


def apply_operator(G: SimplicialAbGroup, theta: tuple[int, ...], n_src: int) -> IntMatrix:
    """θ^*: G_{n_src} -> G_{len(θ)-1}, built from faces and degeneracies."""
    tau, iota = epi_mono(theta)
    m = len(iota) - 1
    if tuple(iota) != tuple(range(n_src + 1)):
        # ι misses some j; ι = δ^j ∘ ι' with the largest missing j
        missing = max(set(range(n_src + 1)) - set(iota))
        rest = tuple(v if v < missing else v - 1 for v in iota)
        first = G.faces[n_src][missing]
        return apply_operator(G, compose(rest, tau), n_src - 1) @ first
    n = len(theta) - 1
    if n == m:
        return IntMatrix.identity(G.ranks[n])
    # τ = τ' ∘ σ^j where τ[j] == τ[j+1]
    j = max(i for i in range(n) if tau[i] == tau[i + 1])
    rest = tuple(tau[i] if i <= j else tau[i + 1] for i in range(n))
    return G.degens[n - 1][j] @ apply_operator(G, rest, n_src)


# coface complexes --------------------------------------------------------------------

def alternating_coface(A: CosimplicialAbGroup) -> CochainComplex:
    """C^co(A): degree k term A^k, d = Σ (-1)^i d^i."""
    if not getattr(A, "verified", False):
        bad = A.violations()
        if bad:
            raise MalformedComplexError(f"cosimplicial identities fail: {bad[0]}")
    targets = getattr(A, "coface_targets", None)
    if targets is not None:
        return _alternating_from_targets(A, targets)
    d = {}
    for k in range(A.n_max):
        acc = IntMatrix.zeros(A.ranks[k + 1], A.ranks[k])
        for i, m in enumerate(A.cofaces[k]):
            acc = acc + (m if i % 2 == 0 else -m)
        d[k] = acc
    C = CochainComplex({k: r for k, r in enumerate(A.ranks)}, d, A.coeff)
    C.reliable_max = A.n_max - 1
    return C


def _alternating_from_targets(A: CosimplicialAbGroup, targets) -> CochainComplex:
    """Same complex when every coface is a pullback along an index array."""
    d = {}
    for k in range(A.n_max):
        rows = np.arange(A.ranks[k + 1])
        entries = []
        for i, t in enumerate(targets[k]):
            sign = -1 if i % 2 else 1
            entries.extend(zip(rows.tolist(), t.tolist(), [sign] * len(rows)))
        d[k] = IntMatrix.from_entries(A.ranks[k + 1], A.ranks[k], entries)
    C = CochainComplex({k: r for k, r in enumerate(A.ranks)}, d, A.coeff)
    C.reliable_max = A.n_max - 1
    return C


def normalized_coface(A: CosimplicialAbGroup, cross_check: bool | None = None) -> CochainComplex:
    """N^co(A) as ∩_j ker s^j with the alternating coface differential.

    The quotient reading A^n / Σ_{i>=1} im d^i is computed as a cross-check
    (cohomology must agree); a coface that fails to preserve the quotient
    raises ConventionError.
    """
    full = alternating_coface(A)
    bases = {}
    for n in range(A.n_max + 1):
        if n == 0 or not A.codegens[n]:
            bases[n] = IntMatrix.identity(A.ranks[n])
        else:
            bases[n] = kernel_basis(IntMatrix.vstack(list(A.codegens[n])))
    d = {}
    for n in range(A.n_max):
        img = full.diff(n) @ bases[n]
        try:
            d[n] = solve_in_basis(bases[n + 1], img)
        except ValueError as exc:
            raise ConventionError(f"coface differential leaves the codegeneracy kernel "
                                  f"in degree {n + 1}") from exc
    N = CochainComplex({n: b.cols for n, b in bases.items()}, d, A.coeff)
    N.inclusions = bases
    N.reliable_max = A.n_max - 1
    if cross_check is None:
        cross_check = max(A.ranks) <= CROSS_CHECK_LIMIT
    if cross_check:
        Q = quotient_coface(A)
        for n in range(A.n_max):
            if Q.cohomology(n) != N.cohomology(n) or full.cohomology(n) != N.cohomology(n):
                raise ConventionError(f"normalized coface readings disagree in degree {n}")
    return N


def quotient_coface(A: CosimplicialAbGroup) -> CochainComplex:
    """A^n / Σ_{i=1}^{n} im d^i with the induced alternating differential."""
    full = alternating_coface(A)
    quot, lift = {}, {}
    for n in range(A.n_max + 1):
        r = A.ranks[n]
        gens = [A.cofaces[n - 1][i] for i in range(1, n + 1)] if n >= 1 else []
        if not gens:
            quot[n] = IntMatrix.identity(r)
            lift[n] = IntMatrix.identity(r)
            continue
        G = IntMatrix.hstack(gens)
        U, D, _ = smith_normal_form(G)
        diag = [D.entry(i, i) for i in range(min(D.rows, D.cols)) if D.entry(i, i)]
        if any(v != 1 for v in diag):
            raise ConventionError(f"coface images are not a direct summand in degree {n}")
        s = len(diag)
        quot[n] = U.submatrix(range(s, r), range(r))
        Uinv = solve_in_basis(U, IntMatrix.identity(r))
        lift[n] = Uinv.submatrix(range(r), range(s, r))
    d = {}
    for n in range(A.n_max):
        dn = full.diff(n)
        if n >= 1:
            sub = IntMatrix.hstack([A.cofaces[n - 1][i] for i in range(1, n + 1)])
            if not (quot[n + 1] @ dn @ sub).is_zero():
                raise ConventionError(f"coface differential does not preserve the quotient in degree {n}")
        d[n] = quot[n + 1] @ dn @ lift[n]
    return CochainComplex({n: q.rows for n, q in quot.items()}, d, A.coeff)


# Eilenberg–MacLane objects and W̄ -----------------------------------------------

def em_object(A: FgAbGroup, k: int, n_max: int) -> SimplicialAbGroup:
    """Γ(A[k]), the simplicial model of K(A, k)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if n_max < k + 2:
        raise BoundError(f"K(A,{k}) needs truncation degree >= {k + 2}, got {n_max}")
    G = gamma(shift(concentrated(A, 0), k), n_max)
    G.name = f"K({A},{k})"
    return G


def wbar(G: SimplicialAbGroup, n_max: int | None = None) -> SimplicialAbGroup:
    """W̄G with degree n = G_{n-1} ⊕ ... ⊕ G_0 and the delooping face and
    degeneracy formulas written slot by slot.

    Slot t of degree n holds g_{n-1-t} ∈ G_{n-1-t}. Group operations are
    written additively, so the product g·d_0(g') is a sum.
    """
    if not isinstance(G, SimplicialAbGroup):
        raise ScopeError("W̄ is implemented for simplicial abelian groups only")
    if n_max is None:
        n_max = G.n_max + 1
    if n_max > G.n_max + 1:
        raise BoundError(f"W̄ up to degree {n_max} needs the input up to degree {n_max - 1}")
    r = G.ranks

    def slots(n):  # ranks of the slots of W̄_n, slot t = G_{n-1-t}
        return [r[n - 1 - t] for t in range(n)]

    def gface(m, i):
        return G.faces[m][i]

    def gdeg(m, i):
        return G.degens[m][i]

    ranks = [sum(slots(n)) for n in range(n_max + 1)]
    faces = [None]
    for n in range(1, n_max + 1):
        src, tgt = slots(n), slots(n - 1)
        fl = []
        # d_0 drops g_{n-1}: output slot t' reads input slot t'+1
        fl.append(IntMatrix.block({(t, t + 1): IntMatrix.identity(tgt[t]) for t in range(n - 1)},
                                  tgt, src))
        for i in range(1, n + 1):
            blocks = {}
            for t in range(n - 1):
                if t < i - 1:
                    blocks[(t, t)] = gface(n - 1 - t, i - 1 - t)
                elif t == i - 1:
                    blocks[(t, t + 1)] = IntMatrix.identity(tgt[t])
                    blocks[(t, t)] = gface(n - 1 - t, 0)
                else:
                    blocks[(t, t + 1)] = IntMatrix.identity(tgt[t])
            fl.append(IntMatrix.block(blocks, tgt, src))
        faces.append(fl)
    degens = []
    for n in range(n_max):
        src, tgt = slots(n), slots(n + 1)
        sl = []
        for i in range(n + 1):
            blocks = {}
            for t in range(n + 1):
                if t < i:
                    blocks[(t, t)] = gdeg(n - 1 - t, i - 1 - t)
                elif t > i:
                    blocks[(t, t - 1)] = IntMatrix.identity(tgt[t])
            sl.append(IntMatrix.block(blocks, tgt, src))
        degens.append(sl)
    W = SimplicialAbGroup(ranks, faces, degens, G.coeff, name=f"Wbar({G.name})")
    W.preferred_moore = _wbar_moore_basis(G, W, n_max)
    return W


def _wbar_moore_basis(G, W, n_max):
    """Image of N_{n-1}G in N_n W̄G: g ↦ ±(g, -d_0 g, 0, ..., 0).

    The sign (-1)^(n+1) makes the identification carry d_0 of NG to d_0 of
    N W̄G on the nose.
    """
    _, gb = moore_complex(G.truncate(min(G.n_max, n_max - 1)))
    out = {0: IntMatrix.identity(W.ranks[0])}
    for n in range(1, n_max + 1):
        K = gb[n - 1]
        sign = 1 if n % 2 else -1
        parts = [K.scale(sign)]
        if n >= 2:
            parts.append((G.faces[n - 1][0] @ K).scale(-sign))
        rest = W.ranks[n] - sum(p.rows for p in parts)
        if rest:
            parts.append(IntMatrix.zeros(rest, K.cols))
        out[n] = IntMatrix.vstack(parts)
    return out


def wbar_iter(A: FgAbGroup, k: int, n_max: int, with_iso: bool = False):
    """W̄^k of the constant simplicial group on A, optionally with an explicit
    isomorphism Γ(A[k]) -> W̄^k cA (checked to be unimodular and simplicial).
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if n_max < k + 2:
        raise BoundError(f"W̄^{k} needs truncation degree >= {k + 2}, got {n_max}")
    W = constant_simplicial_group(A, n_max - k)
    for _ in range(k):
        W = wbar(W)
    if not with_iso:
        return W
    E = em_object(A, k, n_max)
    return W, gamma_to(E, W, k)


def gamma_to(E: SimplicialAbGroup, W: SimplicialAbGroup, k: int) -> dict:
    """The map Γ(A[k]) -> W sending the generator of summand σ to σ^*(x), with x
    spanning N_k(W). Returns per-degree matrices after checking it is an
    isomorphism of simplicial abelian groups.
    """
    Nk = normalized_chain(W.truncate(k), cross_check=False).moore_bases[k] if k else \
        IntMatrix.identity(W.ranks[0])
    if Nk.cols != 1:
        raise MalformedComplexError(f"expected rank-one N_{k}, got {Nk.cols}")
    layout = E.layout
    maps = {}
    for n in range(E.n_max + 1):
        cols = []
        for s, m, off in layout.blocks[n]:
            cols.append(apply_operator(W, s, k) @ Nk)
        M = IntMatrix.hstack(cols) if cols else IntMatrix.zeros(W.ranks[n], 0)
        if M.rows != M.cols:
            raise MalformedComplexError(f"ranks differ in degree {n}: {M.rows} vs {M.cols}")
        div = elementary_divisors(M)
        if len(div) != M.rows or any(v != 1 for v in div):
            raise MalformedComplexError(f"Γ(A[{k}]) -> W̄^{k} is not invertible in degree {n}")
        maps[n] = M
    for n in range(1, E.n_max + 1):
        for i in range(n + 1):
            if maps[n - 1] @ E.faces[n][i] != W.faces[n][i] @ maps[n]:
                raise MalformedComplexError(f"map does not commute with d_{i} in degree {n}")
    for n in range(E.n_max):
        for i in range(n + 1):
            if maps[n + 1] @ E.degens[n][i] != W.degens[n][i] @ maps[n]:
                raise MalformedComplexError(f"map does not commute with s_{i} in degree {n}")
    return maps


def round_trip_iso(C: ChainComplex, n_max: int | None = None) -> dict:
    """Explicit isomorphism C -> N Γ(C) in degrees 0..n_max.

    N is computed as the kernel of d_1..d_n, ignoring the preferred basis, and
    the identity summand of Γ(C)_n is expressed in that kernel basis. Raises
    unless every degree is invertible over ℤ and the maps are a chain map.
    """
    _, hi = C.bounds
    n_max = max(hi, 0) + 1 if n_max is None else n_max
    G = gamma(C, n_max)
    K, bases = moore_complex(G, use_preferred=False)
    phi = {}
    for n in range(n_max + 1):
        try:
            m = solve_in_basis(bases[n], G.preferred_moore[n])
        except ValueError as exc:
            raise MalformedComplexError(f"identity summand leaves N_{n}: {exc}") from exc
        div = elementary_divisors(m)
        if m.rows != m.cols or len(div) != m.rows or any(v != 1 for v in div):
            raise MalformedComplexError(f"C_{n} -> N_{n} Γ(C) is not invertible")
        phi[n] = m
    for n in range(1, n_max + 1):
        if K.diff(n) @ phi[n] != phi[n - 1] @ C.diff(n):
            raise MalformedComplexError(f"C -> N Γ(C) does not commute with d in degree {n}")
    return phi


def delooping_shift_iso(G: SimplicialAbGroup, n_max: int | None = None) -> dict:
    """Explicit isomorphism (NG)[1] -> N(W̄G) in degrees 0..n_max.

    N(W̄G) is recomputed as a kernel, so the slotwise image of NG has to be
    found inside it and shown invertible over ℤ and compatible with d_0.
    """
    W = wbar(G, n_max)
    NG, _ = moore_complex(G.truncate(W.n_max - 1))
    NW, bases = moore_complex(W, use_preferred=False)
    maps = {}
    for n in range(W.n_max + 1):
        try:
            m = solve_in_basis(bases[n], W.preferred_moore[n])
        except ValueError as exc:
            raise MalformedComplexError(f"image of N_{n - 1}G leaves N_{n}W̄G: {exc}") from exc
        div = elementary_divisors(m)
        if m.rows != m.cols or len(div) != m.rows or any(v != 1 for v in div):
            raise MalformedComplexError(f"N_{n - 1}G -> N_{n}W̄G is not invertible")
        maps[n] = m
    for n in range(2, W.n_max + 1):
        if NW.diff(n) @ maps[n] != maps[n - 1] @ NG.diff(n - 1):
            raise MalformedComplexError(f"shift map does not commute with d in degree {n}")
    return maps

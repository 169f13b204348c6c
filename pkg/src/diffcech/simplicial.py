"""Truncated finite simplicial sets, nerves, Čech nerves and simplicial
abelian groups.

Simplicial sets store face and degeneracy maps as integer index tables, one
numpy array of shape (k+1, |X_k|) per degree. Eilenberg–Zilber normal forms
are derived from the tables on demand rather than stored. A simplicial set
may carry a component partition in every degree (needed for the
component-constant function modules); faces and degeneracies must respect it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np
from .abelian import FgAbGroup, Z
from .complexes import ChainComplex
from .errors import (BoundError, CategoryLawError, MalformedComplexError, ModelError,
                     NotACoverError, ResourceCapError)
from .graphs import component_labels
from .linalg import IntMatrix, kernel_basis, solve_in_basis

IDX = np.int64


class _KeyIndex:
    """Locate integer rows among a fixed table of rows."""

    def __init__(self, rows: np.ndarray, radix: int):
        rows = np.asarray(rows, dtype=IDX)
        self.width = rows.shape[1] if rows.ndim == 2 else 0
        self.radix = max(int(radix), 1)
        self.exact = self.radix ** max(self.width, 1) < 2 ** 62
        if self.exact:
            keys = self._keys(rows)
            self.order = np.argsort(keys, kind="stable")
            self.sorted = keys[self.order]
        else:
            self.table = {tuple(r): i for i, r in enumerate(rows.tolist())}

    def _keys(self, rows):
        keys = np.zeros(rows.shape[0], dtype=IDX)
        for j in range(self.width):
            keys = keys * self.radix + rows[:, j]
        return keys

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=IDX)
        if rows.shape[0] == 0:
            return np.zeros(0, dtype=IDX)
        if self.exact:
            keys = self._keys(rows)
            pos = np.searchsorted(self.sorted, keys)
            pos = np.minimum(pos, len(self.sorted) - 1)
            if len(self.sorted) == 0 or np.any(self.sorted[pos] != keys):
                raise KeyError("row not present")
            return self.order[pos]
        return np.array([self.table[tuple(r)] for r in rows.tolist()], dtype=IDX)


class TruncatedSimplicialSet:
    """Finite simplicial set truncated at degree ``n_max``.

    ``faces[k]`` has shape (k+1, |X_k|) for 1 <= k <= n_max and
    ``degens[k]`` has shape (k+1, |X_k|) for 0 <= k < n_max.
    ``components[k]`` is an optional array of component ids of X_k.
    """

    def __init__(self, sizes: Sequence[int], faces, degens, components=None,
                 labeler: Callable | None = None, name: str = ""):
        self.sizes = [int(s) for s in sizes]
        self.n_max = len(self.sizes) - 1
        self.faces = [None] + [np.asarray(f, dtype=IDX).reshape(k + 1, self.sizes[k])
                               for k, f in enumerate(faces[1:], start=1)]
        self.degens = [np.asarray(s, dtype=IDX).reshape(k + 1, self.sizes[k])
                       for k, s in enumerate(degens)]
        if len(self.faces) != self.n_max + 1 or len(self.degens) != self.n_max:
            raise ValueError("face/degeneracy tables do not match truncation degree")
        self.components = None
        self.ncomp = None
        if components is not None:
            self.components = [np.asarray(c, dtype=IDX) for c in components]
            self.ncomp = [int(c.max()) + 1 if len(c) else 0 for c in self.components]
        self.labeler = labeler
        self.name = name
        self.meta: dict = {}

    def face(self, k: int, i: int) -> np.ndarray:
        return self.faces[k][i]

    def degeneracy(self, k: int, i: int) -> np.ndarray:
        return self.degens[k][i]

    def describe(self, k: int, x: int) -> str:
        if self.labeler is not None:
            return str(self.labeler(k, int(x)))
        return f"x{k}[{int(x)}]"

    def nondegenerate_mask(self, k: int) -> np.ndarray:
        mask = np.ones(self.sizes[k], dtype=bool)
        if k >= 1:
            for s in self.degens[k - 1]:
                mask[s] = False
        return mask

    def nondegenerate_counts(self) -> list[int]:
        return [int(self.nondegenerate_mask(k).sum()) for k in range(self.n_max + 1)]

    def normal_form(self, k: int, x: int) -> tuple[int, int, tuple[int, ...]]:
        """(generator degree, generator index, strictly decreasing degeneracy word)."""
        word = []
        x = int(x)
        while k > 0:
            hit = None
            for i in range(k - 1, -1, -1):
                y = int(self.faces[k][i][x])
                if int(self.degens[k - 1][i][y]) == x:
                    hit = (i, y)
                    break
            if hit is None:
                break
            word.append(hit[0])
            x = hit[1]
            k -= 1
        return k, x, tuple(word)

    def truncate(self, n: int) -> "TruncatedSimplicialSet":
        if n > self.n_max:
            raise BoundError(f"cannot truncate degree {self.n_max} object at {n}")
        comps = self.components[:n + 1] if self.components is not None else None
        out = TruncatedSimplicialSet(self.sizes[:n + 1], self.faces[:n + 1], self.degens[:n],
                                     comps, self.labeler, self.name)
        out.meta = dict(self.meta)
        return out

    def census(self) -> dict:
        out = {"simplices": list(self.sizes), "nondegenerate": self.nondegenerate_counts()}
        if self.ncomp is not None:
            out["components"] = list(self.ncomp)
        return out

    def __repr__(self):
        return f"TruncatedSimplicialSet({self.name!r}, sizes={self.sizes})"


# identities -----------------------------------------------------------------

@dataclass
class Violation:
    identity: str
    degree: int
    simplex: int
    label: str

    def __str__(self):
        return f"{self.identity} fails on degree-{self.degree} simplex {self.label}"


def _first_mismatch(a, b):
    bad = np.nonzero(a != b)[0]
    return int(bad[0]) if len(bad) else None


def verify_simplicial_identities(X: TruncatedSimplicialSet) -> list[Violation]:
    """All violated simplicial identities, one witness per identity and degree."""
    out = []
    F, S = X.faces, X.degens

    def note(name, k, bad):
        if bad is not None:
            out.append(Violation(name, k, bad, X.describe(k, bad)))

    for k in range(2, X.n_max + 1):
        for j in range(k + 1):
            for i in range(j):
                lhs = F[k - 1][i][F[k][j]]
                rhs = F[k - 1][j - 1][F[k][i]]
                note(f"d_{i}d_{j} = d_{j - 1}d_{i}", k, _first_mismatch(lhs, rhs))
    for k in range(X.n_max):
        ident = np.arange(X.sizes[k], dtype=IDX)
        for j in range(k + 1):
            sj = S[k][j]
            for i in range(k + 2):
                lhs = F[k + 1][i][sj]
                if i < j:
                    rhs = S[k - 1][j - 1][F[k][i]]
                    name = f"d_{i}s_{j} = s_{j - 1}d_{i}"
                elif i in (j, j + 1):
                    rhs = ident
                    name = f"d_{i}s_{j} = id"
                else:
                    rhs = S[k - 1][j][F[k][i - 1]]
                    name = f"d_{i}s_{j} = s_{j}d_{i - 1}"
                note(name, k, _first_mismatch(lhs, rhs))
        if k + 2 <= X.n_max:
            for j in range(k + 1):
                for i in range(j + 1):
                    lhs = S[k + 1][i][S[k][j]]
                    rhs = S[k + 1][j + 1][S[k][i]]
                    note(f"s_{i}s_{j} = s_{j + 1}s_{i}", k, _first_mismatch(lhs, rhs))
    if X.components is not None:
        for k in range(1, X.n_max + 1):
            for i in range(k + 1):
                bad = _component_violation(X, k, X.faces[k][i], k - 1)
                note(f"d_{i} respects components", k, bad)
    return out


def _component_violation(X, k, table, k_tgt):
    """First simplex whose component does not map to a single component."""
    comp_src = X.components[k]
    img = X.components[k_tgt][table]
    if len(comp_src) == 0:
        return None
    rep = np.full(X.ncomp[k], -1, dtype=IDX)
    rep[comp_src[::-1]] = np.arange(len(comp_src) - 1, -1, -1)
    return _first_mismatch(img, img[rep[comp_src]])


@dataclass
class SimplicialMap:
    source: TruncatedSimplicialSet
    target: TruncatedSimplicialSet
    maps: list  # maps[k]: array |source_k| -> target_k indices

    def verify(self) -> list[str]:
        out = []
        X, Y = self.source, self.target
        for k in range(1, min(X.n_max, Y.n_max) + 1):
            for i in range(k + 1):
                bad = _first_mismatch(self.maps[k - 1][X.faces[k][i]], Y.faces[k][i][self.maps[k]])
                if bad is not None:
                    out.append(f"map fails to commute with d_{i} at {X.describe(k, bad)}")
        for k in range(min(X.n_max, Y.n_max)):
            for i in range(k + 1):
                bad = _first_mismatch(self.maps[k + 1][X.degens[k][i]], Y.degens[k][i][self.maps[k]])
                if bad is not None:
                    out.append(f"map fails to commute with s_{i} at {X.describe(k, bad)}")
        return out


# categories -------------------------------------------------------------------

class FinCategory:
    """Finite category given by source/target/identity arrays and a sparse
    composition table {(g, f): g∘f} defined on composable pairs tgt f = src g.
    """

    def __init__(self, objects: Sequence, morphisms: Sequence, src, tgt, identity,
                 composites: dict, check: bool = True):
        self.objects = list(objects)
        self.morphisms = list(morphisms)
        self.src = np.asarray(src, dtype=IDX)
        self.tgt = np.asarray(tgt, dtype=IDX)
        self.identity = np.asarray(identity, dtype=IDX)
        nm = len(self.morphisms)
        if len(composites):
            pairs = np.array(list(composites.keys()), dtype=IDX).reshape(-1, 2)
            vals = np.array(list(composites.values()), dtype=IDX)
            keys = pairs[:, 0] * nm + pairs[:, 1]
            order = np.argsort(keys)
            self._ckeys, self._cvals = keys[order], vals[order]
        else:
            self._ckeys = np.zeros(0, dtype=IDX)
            self._cvals = np.zeros(0, dtype=IDX)
        self._out = None
        if check:
            self.verify()

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return len(self.morphisms)

    def compose(self, g, f):
        """g∘f for arrays (or scalars) of composable morphisms."""
        g = np.asarray(g, dtype=IDX)
        f = np.asarray(f, dtype=IDX)
        keys = g * self.n_morphisms + f
        if keys.size == 0:
            return keys
        pos = np.searchsorted(self._ckeys, keys)
        pos = np.minimum(pos, max(len(self._ckeys) - 1, 0))
        if len(self._ckeys) == 0 or np.any(self._ckeys[pos] != keys):
            flat = np.atleast_1d(keys)
            bad = next(int(k) for k in flat if k not in set(self._ckeys.tolist()))
            gi, fi = divmod(bad, self.n_morphisms)
            raise CategoryLawError(f"composite {self.morphisms[gi]}∘{self.morphisms[fi]} is missing")
        return self._cvals[pos]

    def out_table(self):
        """(morphisms sorted by source, start offsets per object)."""
        if self._out is None:
            order = np.argsort(self.src, kind="stable")
            starts = np.searchsorted(self.src[order], np.arange(self.n_objects + 1))
            self._out = (order, starts)
        return self._out

    def composable_pairs(self):
        """Arrays (g, f) over all pairs with tgt f = src g."""
        order, starts = self.out_table()
        counts = (starts[1:] - starts[:-1])[self.tgt]
        f = np.repeat(np.arange(self.n_morphisms, dtype=IDX), counts)
        base = np.repeat(starts[:-1][self.tgt], counts)
        within = np.arange(len(f), dtype=IDX) - np.repeat(np.cumsum(counts) - counts, counts)
        g = order[base + within]
        return g, f

    def verify(self):
        nm, no = self.n_morphisms, self.n_objects
        if len(self.src) != nm or len(self.tgt) != nm or len(self.identity) != no:
            raise CategoryLawError("table sizes do not match")
        idm = self.identity
        if np.any(self.src[idm] != np.arange(no)) or np.any(self.tgt[idm] != np.arange(no)):
            raise CategoryLawError("identity morphism with wrong endpoints")
        g, f = self.composable_pairs()
        h = self.compose(g, f)
        bad = _first_mismatch(self.src[h], self.src[f])
        if bad is None:
            bad = _first_mismatch(self.tgt[h], self.tgt[g])
        if bad is not None:
            raise CategoryLawError(f"composite {self.morphisms[g[bad]]}∘{self.morphisms[f[bad]]} "
                                   "has wrong endpoints")
        if len(self._ckeys) != len(g):
            raise CategoryLawError("composition table defined on non-composable pairs")
        allm = np.arange(nm, dtype=IDX)
        bad = _first_mismatch(self.compose(idm[self.tgt], allm), allm)
        if bad is None:
            bad = _first_mismatch(self.compose(allm, idm[self.src]), allm)
        if bad is not None:
            raise CategoryLawError(f"identity law fails for {self.morphisms[bad]}")
        # associativity: (h g) f = h (g f) over all composable triples
        order, starts = self.out_table()
        counts = (starts[1:] - starts[:-1])[self.tgt[g]]
        gg = np.repeat(g, counts)
        ff = np.repeat(f, counts)
        base = np.repeat(starts[:-1][self.tgt[g]], counts)
        within = np.arange(len(gg), dtype=IDX) - np.repeat(np.cumsum(counts) - counts, counts)
        hh = order[base + within]
        lhs = self.compose(self.compose(hh, gg), ff)
        rhs = self.compose(hh, self.compose(gg, ff))
        bad = _first_mismatch(lhs, rhs)
        if bad is not None:
            raise CategoryLawError("associativity fails for "
                                   f"{self.morphisms[hh[bad]]}, {self.morphisms[gg[bad]]}, "
                                   f"{self.morphisms[ff[bad]]}")

    def underlying_components(self) -> int:
        n, _ = component_labels(self.n_objects, self.src, self.tgt)
        return n


class FinGroupoid(FinCategory):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.inverse = self._inverses()

    def _inverses(self):
        g, f = self.composable_pairs()
        h = self.compose(g, f)
        hit = (h == self.identity[self.src[f]]) & (self.src[g] == self.tgt[f])
        inv = np.full(self.n_morphisms, -1, dtype=IDX)
        inv[f[hit]] = g[hit]
        if np.any(inv < 0):
            bad = int(np.nonzero(inv < 0)[0][0])
            raise CategoryLawError(f"morphism {self.morphisms[bad]} has no inverse")
        if np.any(self.compose(np.arange(self.n_morphisms), inv) != self.identity[self.tgt]):
            raise CategoryLawError("left and right inverses disagree")
        return inv


def one_object_category(elements: Sequence, mul: np.ndarray, unit: int, groupoid=False):
    """Monoid (or group) with mul[a, b] = a·b as a one-object category; g∘f = g·f."""
    n = len(elements)
    comps = {(a, b): int(mul[a, b]) for a in range(n) for b in range(n)}
    cls = FinGroupoid if groupoid else FinCategory
    return cls(["*"], list(elements), np.zeros(n, dtype=IDX), np.zeros(n, dtype=IDX),
               [unit], comps)


# nerves -------------------------------------------------------------------------

def _chains(C: FinCategory, n_max: int, cap: int | None):
    """Composable chains L[0..k-1] with tgt L[j] = src L[j+1], lexicographic."""
    order, starts = C.out_table()
    out = [np.arange(C.n_objects, dtype=IDX).reshape(-1, 1)]  # degree 0: objects
    if n_max >= 1:
        out.append(np.arange(C.n_morphisms, dtype=IDX).reshape(-1, 1))
    for k in range(2, n_max + 1):
        prev = out[-1]
        last_tgt = C.tgt[prev[:, -1]]
        counts = starts[last_tgt + 1] - starts[last_tgt]
        total = int(counts.sum())
        if cap is not None and total > cap:
            raise ResourceCapError(f"nerve degree {k}", total, cap)
        rows = np.repeat(prev, counts, axis=0)
        base = np.repeat(starts[last_tgt], counts)
        within = np.arange(total, dtype=IDX) - np.repeat(np.cumsum(counts) - counts, counts)
        out.append(np.hstack([rows, order[base + within].reshape(-1, 1)]))
    return out


def nerve_of_elements(C: FinCategory, fiber_sizes, fiber_maps, fiber_components=None,
                      n_max: int = 2, cap: int | None = None, name: str = "",
                      vertex_names=None) -> TruncatedSimplicialSet:
    """Nerve of the category of elements of a covariant functor F: C -> FinSet.

    A k-simplex is (v, L[0..k-1]) with v in F(src L[0]); d_0 pushes v along
    L[0] and drops it, the middle faces compose, d_k drops the last arrow and
    degeneracies insert identities. With one-point fibers this is the nerve of
    C; with probe vertex sets it is the resolution QX; with a monoid acting on
    a set it is the bar construction.
    """
    if n_max < 0:
        raise BoundError("n_max must be non-negative")
    fiber_sizes = np.asarray(fiber_sizes, dtype=IDX)
    moff = np.zeros(C.n_morphisms + 1, dtype=IDX)
    for m, fm in enumerate(fiber_maps):
        if len(fm) != fiber_sizes[C.src[m]]:
            raise ModelError(f"fiber map of {C.morphisms[m]} has the wrong length")
        moff[m + 1] = moff[m] + len(fm)
    flat = np.concatenate([np.asarray(fm, dtype=IDX) for fm in fiber_maps]) if C.n_morphisms else \
        np.zeros(0, dtype=IDX)
    if fiber_components is None:
        fiber_components = [np.arange(s, dtype=IDX) for s in fiber_sizes]
    fiber_components = [np.asarray(c, dtype=IDX) for c in fiber_components]
    fcount = np.array([int(c.max()) + 1 if len(c) else 0 for c in fiber_components], dtype=IDX)
    coff = np.concatenate([[0], np.cumsum(fiber_sizes)])
    fcomp_flat = np.concatenate(fiber_components) if len(fiber_components) else np.zeros(0, dtype=IDX)

    chains = _chains(C, n_max, cap)
    chain_index = [None] + [_KeyIndex(chains[k], C.n_morphisms) for k in range(1, n_max + 1)]
    obj0 = [np.arange(C.n_objects, dtype=IDX)] + [C.src[chains[k][:, 0]] for k in range(1, n_max + 1)]

    sizes, offsets, simplex_chain, simplex_v, comps = [], [], [], [], []
    for k in range(n_max + 1):
        per = fiber_sizes[obj0[k]]
        off = np.concatenate([[0], np.cumsum(per)]).astype(IDX)
        total = int(off[-1])
        if cap is not None and total > cap:
            raise ResourceCapError(f"simplices in degree {k}", total, cap)
        ch = np.repeat(np.arange(len(per), dtype=IDX), per)
        v = np.arange(total, dtype=IDX) - off[ch]
        cper = fcount[obj0[k]]
        cbase = np.concatenate([[0], np.cumsum(cper)]).astype(IDX)
        comps.append(cbase[ch] + fcomp_flat[coff[obj0[k][ch]] + v])
        sizes.append(total)
        offsets.append(off)
        simplex_chain.append(ch)
        simplex_v.append(v)

    def chain_face(k, i):
        L = chains[k]
        if k == 1:
            return C.tgt[L[:, 0]] if i == 0 else C.src[L[:, 0]]
        if i == 0:
            rows = L[:, 1:]
        elif i == k:
            rows = L[:, :-1]
        else:
            mid = C.compose(L[:, i], L[:, i - 1]).reshape(-1, 1)
            rows = np.hstack([L[:, :i - 1], mid, L[:, i + 1:]])
        return chain_index[k - 1].lookup(rows)

    def chain_degen(k, i):
        L = chains[k]
        if k == 0:
            return chain_index[1].lookup(C.identity.reshape(-1, 1))
        obj = C.src[L[:, i]] if i < k else C.tgt[L[:, k - 1]]
        rows = np.hstack([L[:, :i], C.identity[obj].reshape(-1, 1), L[:, i:]])
        return chain_index[k + 1].lookup(rows)

    faces = [None]
    for k in range(1, n_max + 1):
        ch, v = simplex_chain[k], simplex_v[k]
        tab = np.empty((k + 1, sizes[k]), dtype=IDX)
        for i in range(k + 1):
            cf = chain_face(k, i)[ch]
            if i == 0:
                first = chains[k][ch, 0]
                vv = flat[moff[first] + v]
            else:
                vv = v
            tab[i] = offsets[k - 1][cf] + vv
        faces.append(tab)
    degens = []
    for k in range(n_max):
        ch, v = simplex_chain[k], simplex_v[k]
        tab = np.empty((k + 1, sizes[k]), dtype=IDX)
        for i in range(k + 1):
            tab[i] = offsets[k + 1][chain_degen(k, i)[ch]] + v
        degens.append(tab)

    def labeler(k, x):
        L = chains[k][simplex_chain[k][x]]
        o = obj0[k][simplex_chain[k][x]]
        v = simplex_v[k][x]
        vname = vertex_names[o][v] if vertex_names is not None else v
        arrows = ",".join(str(C.morphisms[m]) for m in L)
        head = f"{vname}@{C.objects[o]}" if vertex_names is not None else f"{C.objects[o]}"
        return f"({head}; {arrows})" if k else f"({head})"

    X = TruncatedSimplicialSet(sizes, faces, degens, comps, labeler, name)
    X.meta["chains"] = chains
    X.meta["simplex_chain"] = simplex_chain
    X.meta["simplex_vertex"] = simplex_v
    X.meta["chain_offsets"] = offsets
    X.meta["first_object"] = obj0
    return X


def nerve(C: FinCategory, n_max: int, cap: int | None = None, name: str = "") -> TruncatedSimplicialSet:
    """Nerve of C; each simplex is its own component."""
    ones = np.ones(C.n_objects, dtype=IDX)
    maps = [np.zeros(1, dtype=IDX) for _ in range(C.n_morphisms)]
    return nerve_of_elements(C, ones, maps, None, n_max, cap, name or "nerve")


def constant_simplicial_set(n: int, n_max: int, components=None) -> TruncatedSimplicialSet:
    ident = np.arange(n, dtype=IDX)
    faces = [None] + [np.tile(ident, (k + 1, 1)) for k in range(1, n_max + 1)]
    degens = [np.tile(ident, (k + 1, 1)) for k in range(n_max)]
    comps = None
    if components is not None:
        comps = [np.asarray(components, dtype=IDX)] * (n_max + 1)
    return TruncatedSimplicialSet([n] * (n_max + 1), faces, degens, comps, name="constant")


def cech_nerve(labels, n_points: int, n_max: int, edges=None, cap: int | None = None,
               vertex_names=None) -> TruncatedSimplicialSet:
    """Čech nerve of f: B -> X given by ``labels[b] = f(b)``.

    Degree k holds the (k+1)-fold fiber powers of B over X. With ``edges``
    (a pair of index arrays) the fiber powers carry the induced product graph:
    two tuples are adjacent when every coordinate pair is an edge or equal.
    """
    labels = np.asarray(labels, dtype=IDX)
    nb = len(labels)
    hit = np.zeros(n_points, dtype=bool)
    hit[labels] = True
    if not hit.all():
        raise NotACoverError(f"map misses point(s) {np.nonzero(~hit)[0].tolist()}")
    fibers = [np.nonzero(labels == x)[0] for x in range(n_points)]

    tuples = []
    for k in range(n_max + 1):
        total = sum(len(f) ** (k + 1) for f in fibers)
        if cap is not None and total > cap:
            raise ResourceCapError(f"Čech degree {k}", total, cap)
        blocks = []
        for f in fibers:
            grids = np.meshgrid(*([f] * (k + 1)), indexing="ij")
            blocks.append(np.stack([g.ravel() for g in grids], axis=1))
        tuples.append(np.vstack(blocks).astype(IDX))
    index = [_KeyIndex(t, nb) for t in tuples]

    faces = [None]
    for k in range(1, n_max + 1):
        T = tuples[k]
        faces.append(np.stack([index[k - 1].lookup(np.delete(T, i, axis=1)) for i in range(k + 1)]))
    degens = []
    for k in range(n_max):
        T = tuples[k]
        degens.append(np.stack([index[k + 1].lookup(np.insert(T, i, T[:, i], axis=1))
                                for i in range(k + 1)]))

    comps = None
    if edges is not None:
        nbr = [dict() for _ in range(nb)]
        for b in range(nb):
            nbr[b].setdefault(int(labels[b]), []).append(b)
        for a, b in zip(*[np.asarray(e).tolist() for e in edges]):
            nbr[a].setdefault(int(labels[b]), []).append(b)
            nbr[b].setdefault(int(labels[a]), []).append(a)
        comps = [_product_components(tuples[k], nbr, index[k]) for k in range(n_max + 1)]

    def labeler(k, x):
        row = tuples[k][x]
        if vertex_names is None:
            return "(" + ",".join(map(str, row.tolist())) + ")"
        return "(" + ",".join(vertex_names[b] for b in row.tolist()) + ")"

    X = TruncatedSimplicialSet([len(t) for t in tuples], faces, degens, comps, labeler, "cech")
    X.meta["tuples"] = tuples
    return X


def _product_components(T: np.ndarray, nbr, index: _KeyIndex) -> np.ndarray:
    n, w = T.shape
    if n == 0:
        return np.zeros(0, dtype=IDX)
    src, dst = [], []
    rows = T.tolist()
    for t, row in enumerate(rows):
        common = set(nbr[row[0]])
        for b in row[1:]:
            common &= nbr[b].keys()
        for x in common:
            choices = [nbr[b][x] for b in row]
            for cand in product(*choices):
                if list(cand) != row:
                    src.append(t)
                    dst.append(cand)
    if src:
        dst_idx = index.lookup(np.array(dst, dtype=IDX).reshape(-1, w))
        _, comp = component_labels(n, np.array(src, dtype=IDX), dst_idx)
    else:
        comp = np.arange(n, dtype=IDX)
    return comp


# π_0 and coskeletality -------------------------------------------------------------

@dataclass
class Partition:
    labels: np.ndarray

    def __len__(self):
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    @property
    def classes(self) -> list[list[int]]:
        out = [[] for _ in range(len(self))]
        for i, c in enumerate(self.labels.tolist()):
            out[c].append(i)
        return out


def pi0(X: TruncatedSimplicialSet) -> Partition:
    """Coequalizer of d_0, d_1: X_1 ⇉ X_0, collapsed further by components."""
    if X.n_max < 1:
        raise BoundError("pi0 needs the 1-simplices")
    u = [X.faces[1][0]]
    v = [X.faces[1][1]]
    if X.components is not None:
        c = X.components[0]
        order = np.argsort(c, kind="stable")
        same = c[order][1:] == c[order][:-1]
        u.append(order[1:][same])
        v.append(order[:-1][same])
    _, lab = component_labels(X.sizes[0], np.concatenate(u), np.concatenate(v))
    return Partition(lab)


@dataclass
class CoskeletalResult:
    ok: bool
    k: int
    checked: dict = field(default_factory=dict)  # degree -> (fillers, compatible boundaries)
    witness: str | None = None

    def __bool__(self):
        return self.ok


def _compatible_boundaries(X: TruncatedSimplicialSet, n: int, cap: int) -> np.ndarray:
    """All (y_0..y_n) in X_{n-1} with d_i y_j = d_{j-1} y_i for i < j."""
    m = X.sizes[n - 1]
    if n == 1:
        total = m * m
        if total > cap:
            raise ResourceCapError("boundary tuples in degree 1", total, cap)
        a, b = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
        return np.stack([a.ravel(), b.ravel()], axis=1).astype(IDX)
    F = X.faces[n - 1]
    m_prev = X.sizes[n - 2]

    def grouped(key):
        order = np.argsort(key, kind="stable")
        return order, key[order]

    # y_1 is found through d_0 y_1 = d_0 y_0; later y_j through the pair
    # (d_0 y_j, d_1 y_j) = (d_{j-1} y_0, d_{j-1} y_1)
    by_d0 = grouped(F[0].astype(np.int64))
    by_pair = grouped(F[0].astype(np.int64) * m_prev + F[1])
    P = np.arange(m, dtype=IDX).reshape(-1, 1)
    for j in range(1, n + 1):
        if j == 1:
            order, sorted_keys = by_d0
            key = F[0][P[:, 0]].astype(np.int64)
        else:
            order, sorted_keys = by_pair
            key = F[j - 1][P[:, 0]].astype(np.int64) * m_prev + F[j - 1][P[:, 1]]
        lo = np.searchsorted(sorted_keys, key, side="left")
        counts = np.searchsorted(sorted_keys, key, side="right") - lo
        total = int(counts.sum())
        if total > cap:
            raise ResourceCapError(f"partial boundary tuples in degree {n}", total, cap)
        rows = np.repeat(P, counts, axis=0)
        base = np.repeat(lo, counts)
        within = np.arange(total, dtype=IDX) - np.repeat(np.cumsum(counts) - counts, counts)
        y = order[base + within]
        keep = np.ones(total, dtype=bool)
        for i in range(2, j):
            keep &= F[i][y] == F[j - 1][rows[:, i]]
        P = np.hstack([rows[keep], y[keep].reshape(-1, 1)])
    return P


def is_k_coskeletal(X: TruncatedSimplicialSet, k: int, n_probe: int,
                    cap: int = 5_000_000) -> CoskeletalResult:
    """Every compatible boundary in degrees k < n <= n_probe has exactly one filler."""
    if not (k < n_probe <= X.n_max):
        raise BoundError(f"need k < n_probe <= n_max, got k={k}, n_probe={n_probe}, n_max={X.n_max}")
    res = CoskeletalResult(True, k)
    for n in range(k + 1, n_probe + 1):
        bd = X.faces[n].T.copy()
        uniq, inv, counts = np.unique(bd, axis=0, return_inverse=True, return_counts=True)
        comp = _compatible_boundaries(X, n, cap)
        res.checked[n] = (len(uniq), len(comp))
        if len(uniq) != X.sizes[n]:
            dup = int(np.nonzero(counts > 1)[0][0])
            xs = np.nonzero(inv.ravel() == dup)[0][:2]
            res.ok = False
            res.witness = (f"degree {n}: simplices {X.describe(n, xs[0])} and {X.describe(n, xs[1])} "
                           "share a boundary")
            return res
        if len(comp) != len(uniq):
            have = set(map(tuple, uniq.tolist()))
            missing = next(t for t in map(tuple, comp.tolist()) if t not in have)
            res.ok = False
            res.witness = (f"degree {n}: boundary ("
                           + ", ".join(X.describe(n - 1, y) for y in missing) + ") has no filler")
            return res
    return res


# simplicial and cosimplicial abelian groups -------------------------------------------

class SimplicialAbGroup:
    """Degreewise ℤ^{r_k} ⊗ coeff with integer face/degeneracy matrices.

    faces[k][i]: r_k -> r_{k-1}; degens[k][i]: r_k -> r_{k+1}.
    ``preferred_moore`` may hold column bases of the normalized subcomplex.
    """

    def __init__(self, ranks, faces, degens, coeff: FgAbGroup = Z, check: bool = True,
                 name: str = ""):
        self.ranks = [int(r) for r in ranks]
        self.n_max = len(self.ranks) - 1
        self.faces = faces
        self.degens = degens
        self.coeff = coeff
        self.name = name
        self.preferred_moore: dict | None = None
        if check:
            bad = self.violations()
            if bad:
                raise MalformedComplexError(f"simplicial identities fail: {bad[0]}")

    def group(self, k: int) -> FgAbGroup:
        return self.coeff.power(self.ranks[k])

    def violations(self) -> list[str]:
        out = []
        F, S, r = self.faces, self.degens, self.ranks
        for k in range(1, self.n_max + 1):
            if len(F[k]) != k + 1:
                out.append(f"degree {k} has {len(F[k])} faces")
                return out
            for i, m in enumerate(F[k]):
                if m.shape != (r[k - 1], r[k]):
                    out.append(f"d_{i} in degree {k} has shape {m.shape}")
                    return out
        for k in range(self.n_max):
            for i, m in enumerate(S[k]):
                if m.shape != (r[k + 1], r[k]):
                    out.append(f"s_{i} in degree {k} has shape {m.shape}")
                    return out
        for k in range(2, self.n_max + 1):
            for j in range(k + 1):
                for i in range(j):
                    if F[k - 1][i] @ F[k][j] != F[k - 1][j - 1] @ F[k][i]:
                        out.append(f"d_{i}d_{j} = d_{j - 1}d_{i} fails in degree {k}")
        for k in range(self.n_max):
            I = IntMatrix.identity(r[k])
            for j in range(k + 1):
                for i in range(k + 2):
                    lhs = F[k + 1][i] @ S[k][j]
                    if i < j:
                        rhs = S[k - 1][j - 1] @ F[k][i]
                    elif i in (j, j + 1):
                        rhs = I
                    else:
                        rhs = S[k - 1][j] @ F[k][i - 1]
                    if lhs != rhs:
                        out.append(f"d_{i}s_{j} identity fails in degree {k}")
            if k + 2 <= self.n_max:
                for j in range(k + 1):
                    for i in range(j + 1):
                        if S[k + 1][i] @ S[k][j] != S[k + 1][j + 1] @ S[k][i]:
                            out.append(f"s_{i}s_{j} = s_{j + 1}s_{i} fails in degree {k}")
        return out

    def truncate(self, n: int) -> "SimplicialAbGroup":
        out = SimplicialAbGroup(self.ranks[:n + 1], self.faces[:n + 1], self.degens[:n],
                                self.coeff, check=False, name=self.name)
        if self.preferred_moore is not None:
            out.preferred_moore = {k: v for k, v in self.preferred_moore.items() if k <= n}
        return out

    def __repr__(self):
        return f"SimplicialAbGroup({self.name!r}, ranks={self.ranks}, coeff={self.coeff})"


def free_abelian(X: TruncatedSimplicialSet, coeff: FgAbGroup = Z) -> SimplicialAbGroup:
    """ℤ[X] ⊗ coeff: basis the simplices, structure maps induced by X's."""
    def push(table, n_src, n_tgt):
        return IntMatrix.from_entries(n_tgt, n_src, ((int(t), s, 1) for s, t in enumerate(table)))

    faces = [None] + [[push(X.faces[k][i], X.sizes[k], X.sizes[k - 1]) for i in range(k + 1)]
                      for k in range(1, X.n_max + 1)]
    degens = [[push(X.degens[k][i], X.sizes[k], X.sizes[k + 1]) for i in range(k + 1)]
              for k in range(X.n_max)]
    return SimplicialAbGroup(X.sizes, faces, degens, coeff, name=f"Z[{X.name}]")


def constant_simplicial_group(A: FgAbGroup, n_max: int) -> SimplicialAbGroup:
    one = IntMatrix.identity(1)
    faces = [None] + [[one] * (k + 1) for k in range(1, n_max + 1)]
    degens = [[one] * (k + 1) for k in range(n_max)]
    return SimplicialAbGroup([1] * (n_max + 1), faces, degens, A, name=f"c({A})")


def moore_basis(A: SimplicialAbGroup, n: int) -> IntMatrix:
    """Columns spanning ∩_{i>=1} ker d_i in degree n."""
    if n == 0:
        return IntMatrix.identity(A.ranks[0])
    stacked = IntMatrix.vstack(A.faces[n][1:])
    return kernel_basis(stacked)


def moore_complex(A: SimplicialAbGroup, use_preferred: bool = True) -> tuple[ChainComplex, dict]:
    """Moore complex N(A) with differential d_0, plus the inclusion bases."""
    bases = {}
    for n in range(A.n_max + 1):
        pref = (A.preferred_moore or {}).get(n) if use_preferred else None
        if pref is not None:
            K = moore_basis(A, n)
            try:
                Y = solve_in_basis(pref, K)
                back = solve_in_basis(K, pref)
            except ValueError as exc:
                raise MalformedComplexError(f"preferred Moore basis in degree {n} "
                                            f"does not span the kernel: {exc}") from exc
            if Y.rows != Y.cols or back.rows != back.cols:
                raise MalformedComplexError(f"preferred Moore basis in degree {n} has wrong size")
            bases[n] = pref
        else:
            bases[n] = moore_basis(A, n)
    d = {}
    for n in range(1, A.n_max + 1):
        img = A.faces[n][0] @ bases[n]
        d[n] = solve_in_basis(bases[n - 1], img)
    C = ChainComplex({n: bases[n].cols for n in bases}, d, coeff=A.coeff)
    return C, bases


@dataclass
class HomotopyGroups:
    groups: list
    unreliable: tuple = ()

    def __getitem__(self, i):
        return self.groups[i]

    def __len__(self):
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)


def moore_homotopy(A: SimplicialAbGroup, n_max: int | None = None) -> HomotopyGroups:
    """π_0..π_{n_max-1} as homology of the Moore complex."""
    bad = A.violations()
    if bad:
        raise MalformedComplexError(f"simplicial identities fail: {bad[0]}")
    n_max = A.n_max if n_max is None else n_max
    if n_max > A.n_max:
        raise BoundError(f"object truncated at {A.n_max}, asked for {n_max}")
    if n_max < 1:
        raise BoundError("need n_max >= 1 for any homotopy group")
    C, _ = moore_complex(A.truncate(n_max))
    groups = [C.homology(n) for n in range(n_max)]
    return HomotopyGroups(groups, (n_max - 1,))


class CosimplicialAbGroup:
    """Degreewise ℤ^{r^k} ⊗ coeff with cofaces cofaces[k][i]: r^k -> r^{k+1}
    (i = 0..k+1) and codegeneracies codegens[k][i]: r^k -> r^{k-1} (i = 0..k-1).
    """

    def __init__(self, ranks, cofaces, codegens, coeff: FgAbGroup = Z, check: bool = True,
                 name: str = ""):
        self.ranks = [int(r) for r in ranks]
        self.n_max = len(self.ranks) - 1
        self.cofaces = cofaces
        self.codegens = codegens
        self.coeff = coeff
        self.name = name
        self.census: dict = {}
        self.verified = False
        if check:
            bad = self.violations()
            if bad:
                raise MalformedComplexError(f"cosimplicial identities fail: {bad[0]}")
            self.verified = True

    def group(self, k: int) -> FgAbGroup:
        return self.coeff.power(self.ranks[k])

    def violations(self) -> list[str]:
        out = []
        D, S, r = self.cofaces, self.codegens, self.ranks
        for k in range(self.n_max):
            for i, m in enumerate(D[k]):
                if m.shape != (r[k + 1], r[k]):
                    return [f"d^{i} out of degree {k} has shape {m.shape}"]
        for k in range(1, self.n_max + 1):
            for i, m in enumerate(S[k]):
                if m.shape != (r[k - 1], r[k]):
                    return [f"s^{i} out of degree {k} has shape {m.shape}"]
        for k in range(self.n_max - 1):
            for j in range(k + 3):
                for i in range(j):
                    if D[k + 1][j] @ D[k][i] != D[k + 1][i] @ D[k][j - 1]:
                        out.append(f"d^{j}d^{i} = d^{i}d^{j - 1} fails from degree {k}")
        for k in range(self.n_max):
            I = IntMatrix.identity(r[k])
            for j in range(k + 1):
                for i in range(k + 2):
                    lhs = S[k + 1][j] @ D[k][i]
                    if i < j:
                        rhs = D[k - 1][i] @ S[k][j - 1]
                    elif i in (j, j + 1):
                        rhs = I
                    else:
                        rhs = D[k - 1][i - 1] @ S[k][j]
                    if lhs != rhs:
                        out.append(f"s^{j}d^{i} identity fails from degree {k}")
        for k in range(2, self.n_max + 1):
            for j in range(k - 1):
                for i in range(j + 1):
                    if S[k - 1][j] @ S[k][i] != S[k - 1][i] @ S[k][j + 1]:
                        out.append(f"s^{j}s^{i} = s^{i}s^{j + 1} fails in degree {k}")
        return out

    def __repr__(self):
        return f"CosimplicialAbGroup({self.name!r}, ranks={self.ranks}, coeff={self.coeff})"


def functions_cosimplicial(X: TruncatedSimplicialSet, A: FgAbGroup = Z,
                           n_max: int | None = None) -> CosimplicialAbGroup:
    """Component-constant A-valued functions on X, cofaces = precomposition."""
    if X.components is None:
        raise ModelError(f"{X.name or 'simplicial set'} carries no component data")
    n_max = X.n_max if n_max is None else n_max
    if n_max > X.n_max:
        raise BoundError(f"simplicial set truncated at {X.n_max}, asked for {n_max}")
    reps = []
    for k in range(n_max + 1):
        c = X.components[k]
        rep = np.full(X.ncomp[k], -1, dtype=IDX)
        rep[c[::-1]] = np.arange(len(c) - 1, -1, -1)
        reps.append(rep)

    def pull(k_src, k_tgt, table, what):
        bad = _component_violation(X, k_src, table, k_tgt)
        if bad is not None:
            raise ModelError(f"{what} does not respect components at {X.describe(k_src, bad)}")
        return X.components[k_tgt][table[reps[k_src]]]

    cof_t = [[pull(k + 1, k, X.faces[k + 1][i], f"d_{i}") for i in range(k + 2)]
             for k in range(n_max)]
    cod_t = [[]] + [[pull(k - 1, k, X.degens[k - 1][i], f"s_{i}") for i in range(k)]
                    for k in range(1, n_max + 1)]
    bad = _selection_violations(cof_t, cod_t, n_max)
    if bad:
        raise MalformedComplexError(f"cosimplicial identities fail: {bad[0]}")
    nc = X.ncomp
    cofaces = [[IntMatrix.selection(nc[k + 1], nc[k], t.tolist()) for t in row]
               for k, row in enumerate(cof_t)]
    codegens = [[]] + [[IntMatrix.selection(nc[k - 1], nc[k], t.tolist()) for t in cod_t[k]]
                       for k in range(1, n_max + 1)]
    out = CosimplicialAbGroup(X.ncomp[:n_max + 1], cofaces, codegens, A, check=False,
                              name=f"{A}^{X.name or 'X'}")
    out.verified = True
    out.coface_targets = cof_t
    out.census = {"components": list(X.ncomp[:n_max + 1]), "simplices": list(X.sizes[:n_max + 1])}
    return out


def _selection_violations(D, S, n_max) -> list[str]:
    """Cosimplicial identities for maps given as index arrays.

    A pullback matrix of the map t is the selection with row i -> t[i], and
    the product of pullbacks along t1 then t2 is the pullback along t2[t1].
    """
    out = []
    for k in range(n_max - 1):
        for j in range(k + 3):
            for i in range(j):
                if not np.array_equal(D[k][i][D[k + 1][j]], D[k][j - 1][D[k + 1][i]]):
                    out.append(f"d^{j}d^{i} = d^{i}d^{j - 1} fails from degree {k}")
    for k in range(n_max):
        for j in range(k + 1):
            for i in range(k + 2):
                lhs = D[k][i][S[k + 1][j]]
                if i < j:
                    rhs = S[k][j - 1][D[k - 1][i]]
                elif i in (j, j + 1):
                    rhs = np.arange(len(lhs))
                else:
                    rhs = S[k][j][D[k - 1][i - 1]]
                if not np.array_equal(lhs, rhs):
                    out.append(f"s^{j}d^{i} identity fails from degree {k}")
    for k in range(2, n_max + 1):
        for j in range(k - 1):
            for i in range(j + 1):
                if not np.array_equal(S[k][i][S[k - 1][j]], S[k][j + 1][S[k - 1][i]]):
                    out.append(f"s^{j}s^{i} = s^{i}s^{j + 1} fails in degree {k}")
    return out

"""Seeded random inputs for the property suites: chain complexes, simplicial
finite sets, cosimplicial groups and small presentations."""

from __future__ import annotations

from itertools import product

import numpy as np

from .abelian import FgAbGroup, Z
from .complexes import ChainComplex
from .errors import DiffCechError
from .graphs import ProbeGraph
from .linalg import IntMatrix
from .simplicial import (FinCategory, TruncatedSimplicialSet, cech_nerve, functions_cosimplicial,
                         nerve, one_object_category)
from .site import PlotPresentation, Probe, ProbeMap, q_resolution


def random_unimodular(rng: np.random.Generator, n: int, steps: int = 6) -> tuple[IntMatrix, IntMatrix]:
    """(U, U^{-1}) as products of elementary row operations."""
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [row[:] for row in U]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.choice(n, 2, replace=False)
        c = int(rng.integers(-2, 3))
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        # the inverse gets the opposite column operation
        for r in V:
            r[j] -= c * r[i]
    return IntMatrix.from_dense(U, n), IntMatrix.from_dense(V, n)


def random_chain_complex(rng: np.random.Generator, top: int = 4, max_pieces: int = 2) -> ChainComplex:
    """Bounded free complex in degrees 0..top: sums of spheres ℤ[n] and disks
    ℤ --m--> ℤ in a randomly changed basis."""
    ranks = [0] * (top + 1)
    entries = {n: [] for n in range(1, top + 1)}
    for n in range(top + 1):
        for _ in range(int(rng.integers(0, max_pieces + 1))):
            ranks[n] += 1
        if n < top:
            for _ in range(int(rng.integers(0, max_pieces + 1))):
                m = int(rng.integers(1, 5))
                entries[n + 1].append((ranks[n], ranks[n + 1], m))
                ranks[n] += 1
                ranks[n + 1] += 1
    d = {n: IntMatrix.from_entries(ranks[n - 1], ranks[n], entries[n]) for n in range(1, top + 1)}
    change = [random_unimodular(rng, r) for r in ranks]
    d = {n: change[n - 1][0] @ m @ change[n][1] for n, m in d.items()}
    return ChainComplex({n: r for n, r in enumerate(ranks)}, d)


def random_preorder(rng: np.random.Generator, n: int, p: float = 0.4) -> FinCategory:
    """Reflexive transitive closure of a random relation, as a thin category."""
    rel = rng.random((n, n)) < p
    np.fill_diagonal(rel, True)
    for k in range(n):
        rel |= rel[:, [k]] & rel[[k], :]
    arrows = [(a, b) for a in range(n) for b in range(n) if rel[a, b]]
    pos = {ab: i for i, ab in enumerate(arrows)}
    comps = {(pos[(b, c)], pos[(a, b)]): pos[(a, c)] for (a, b) in arrows for (b2, c) in arrows if b2 == b}
    return FinCategory(list(range(n)), [f"{a}<{b}" for a, b in arrows], [a for a, _ in arrows],
                       [b for _, b in arrows], [pos[(a, a)] for a in range(n)], comps)


def random_simplicial_set(rng: np.random.Generator, n_max: int) -> TruncatedSimplicialSet:
    """One of: nerve of a random preorder, nerve of a small cyclic group,
    Čech nerve of a random labeled graph, or QX of a random presentation."""
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return nerve(random_preorder(rng, int(rng.integers(1, 4))), n_max, name="preorder")
    if kind == 1:
        n = int(rng.integers(1, 4))
        r = np.arange(n)
        return nerve(one_object_category(list(range(n)), (r[:, None] + r[None, :]) % n, 0, True),
                     n_max, name=f"BZ/{n}")
    if kind == 2:
        pts = int(rng.integers(1, 3))
        nb = int(rng.integers(pts, pts + 3))
        labels = np.concatenate([np.arange(pts), rng.integers(0, pts, nb - pts)])
        u = rng.integers(0, nb, 2)
        keep = u[:1] != u[1:]
        edges = (u[:1][keep], u[1:][keep])
        return cech_nerve(labels, pts, n_max, edges=edges)
    return q_resolution(random_presentation(rng, max_probes=3, max_morphisms=4), n_max)


def random_cosimplicial(rng: np.random.Generator, n_max: int, A: FgAbGroup = Z):
    X = random_simplicial_set(rng, n_max)
    return functions_cosimplicial(X, A, n_max), X


def _graph_maps(src: Probe, tgt: Probe):
    """All label-preserving graph maps src -> tgt as vertex dicts."""
    options = [[w for w in tgt.vertices if tgt.to_space[w] == src.to_space[v]] for v in src.vertices]
    out = []
    for choice in product(*options):
        vmap = dict(zip(src.vertices, choice))
        if src.graph.is_graph_map(tgt.graph, vmap):
            out.append(vmap)
    return out


def random_presentation(rng: np.random.Generator, max_probes: int = 5, max_morphisms: int = 8,
                        attempts: int = 200) -> PlotPresentation:
    """Small valid presentation: ≤ max_probes probes and ≤ max_morphisms
    non-identity morphisms after closing under composition."""
    for _ in range(attempts):
        npts = int(rng.integers(1, 4))
        points = [f"x{i}" for i in range(npts)]
        probes = []
        for k in range(int(rng.integers(1, max_probes + 1))):
            nv = int(rng.integers(1, 4))
            verts = tuple(f"v{i}" for i in range(nv))
            edges = tuple((verts[i], verts[i + 1]) for i in range(nv - 1) if rng.random() < 0.7)
            lab = {v: points[int(rng.integers(0, npts))] for v in verts}
            probes.append(Probe(f"p{k}", ProbeGraph(verts, frozenset(edges)), lab, edges))
        covered = {x for p in probes for x in p.to_space.values()}
        if covered != set(points):
            continue
        maps = []
        for m in range(int(rng.integers(0, 5))):
            s, t = (probes[int(i)] for i in rng.integers(0, len(probes), 2))
            cands = _graph_maps(s, t)
            if cands:
                maps.append(ProbeMap(f"f{m}", s.id, t.id, cands[int(rng.integers(0, len(cands)))]))
        try:
            P = PlotPresentation(points, probes, maps, "random", morphism_cap=64)
        except DiffCechError:
            continue
        if len(P.non_identity_morphisms()) <= max_morphisms:
            return P
    raise DiffCechError("could not draw a small random presentation")

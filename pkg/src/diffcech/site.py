"""Finite plot presentations and the simplicial objects built from them.

A presentation is a finite point set X, finitely many probes (reflexive
graphs labeled in X) and generating probe maps. Loading adds identities and
closes the maps under composition, giving a finite category of probes. From
it we build the nebula B -> X, the resolution QX, the gauge monoid M of
label-preserving endomorphisms of B, the bar construction B//M, and the Čech
nerve of B -> X.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .errors import MalformedInputError, ModelError, ResourceCapError
from .graphs import ProbeGraph, component_labels
from .simplicial import (IDX, FinCategory, TruncatedSimplicialSet, cech_nerve,
                         nerve_of_elements, one_object_category, pi0)

MORPHISM_CAP = 10_000
GAUGE_CAP = 100_000
SIMPLEX_CAP = 2_000_000


@dataclass(frozen=True)
class Probe:
    id: str
    graph: ProbeGraph
    to_space: dict
    raw_edges: tuple = ()

    @property
    def vertices(self):
        return self.graph.vertices


@dataclass(frozen=True)
class ProbeMap:
    id: str
    source: str
    target: str
    vertex_map: dict


@dataclass
class Morphism:
    id: str
    src: int
    tgt: int
    vmap: tuple  # local target index for each local source vertex


class PlotPresentation:
    def __init__(self, points, probes, maps, name: str = "", morphism_cap: int = MORPHISM_CAP):
        self.points = list(points)
        self.probes = list(probes)
        self.maps = list(maps)
        self.name = name
        if len(set(self.points)) != len(self.points):
            raise MalformedInputError("duplicate point names")
        self.point_index = {x: i for i, x in enumerate(self.points)}
        self.probe_index = {}
        for k, p in enumerate(self.probes):
            if p.id in self.probe_index:
                raise MalformedInputError(f"duplicate probe id {p.id!r}")
            self.probe_index[p.id] = k
            missing = [v for v in p.vertices if v not in p.to_space]
            if missing:
                raise MalformedInputError(f"probe {p.id!r}: vertices {missing} have no point")
            unknown = [x for x in p.to_space.values() if x not in self.point_index]
            if unknown:
                raise MalformedInputError(f"probe {p.id!r} maps to unknown points {unknown}")
        seen = set()
        for m in self.maps:
            if m.id in seen:
                raise MalformedInputError(f"duplicate map id {m.id!r}")
            seen.add(m.id)
            for end in (m.source, m.target):
                if end not in self.probe_index:
                    raise MalformedInputError(f"map {m.id!r} references unknown probe {end!r}")
            src = self.probes[self.probe_index[m.source]]
            tgt = self.probes[self.probe_index[m.target]]
            if set(m.vertex_map) != set(src.vertices):
                raise MalformedInputError(f"map {m.id!r} is not defined on exactly the vertices "
                                          f"of {m.source!r}")
            bad = [w for w in m.vertex_map.values() if w not in tgt.graph.index]
            if bad:
                raise MalformedInputError(f"map {m.id!r} hits unknown vertices {bad} of {m.target!r}")
        self._close(morphism_cap)

    # closure ------------------------------------------------------------

    def _close(self, cap):
        self.morphisms: list[Morphism] = []
        self.alias: dict[str, int] = {}
        key_index: dict = {}

        def add(mid, s, t, vmap):
            key = (s, t, vmap)
            if key in key_index:
                return key_index[key], False
            if len(self.morphisms) >= cap:
                raise ResourceCapError("probe morphisms after closure", len(self.morphisms) + 1, cap)
            key_index[key] = len(self.morphisms)
            self.morphisms.append(Morphism(mid, s, t, vmap))
            return key_index[key], True

        for k, p in enumerate(self.probes):
            idx, _ = add(f"id_{p.id}", k, k, tuple(range(len(p.vertices))))
            self.alias[f"id_{p.id}"] = idx
        for m in self.maps:
            s, t = self.probe_index[m.source], self.probe_index[m.target]
            tpos = self.probes[t].graph.index
            vmap = tuple(tpos[m.vertex_map[v]] for v in self.probes[s].vertices)
            idx, _ = add(m.id, s, t, vmap)
            self.alias[m.id] = idx
        composites = {}
        frontier = list(range(len(self.morphisms)))
        while frontier:
            new = []
            n = len(self.morphisms)
            for a in range(n):
                for b in range(n):
                    if (a, b) in composites:
                        continue
                    g, f = self.morphisms[a], self.morphisms[b]
                    if f.tgt != g.src:
                        continue
                    vmap = tuple(g.vmap[v] for v in f.vmap)
                    idx, fresh = add(f"{g.id}∘{f.id}", f.src, g.tgt, vmap)
                    composites[(a, b)] = idx
                    if fresh:
                        new.append(idx)
            frontier = new
        self.composites = composites
        self.category = FinCategory([p.id for p in self.probes], [m.id for m in self.morphisms],
                                    [m.src for m in self.morphisms], [m.tgt for m in self.morphisms],
                                    [self.alias[f"id_{p.id}"] for p in self.probes], composites)

    # views ---------------------------------------------------------------

    def probe(self, pid: str) -> Probe:
        return self.probes[self.probe_index[pid]]

    def labels(self, k: int) -> np.ndarray:
        p = self.probes[k]
        return np.array([self.point_index[p.to_space[v]] for v in p.vertices], dtype=IDX)

    def non_identity_morphisms(self) -> list[int]:
        return [i for i, m in enumerate(self.morphisms)
                if not (m.src == m.tgt and m.vmap == tuple(range(len(m.vmap))))]

    def restrict(self, probe_ids, name: str = "") -> "PlotPresentation":
        keep = set(probe_ids)
        probes = [p for p in self.probes if p.id in keep]
        maps = [m for m in self.maps if m.source in keep and m.target in keep]
        return PlotPresentation(self.points, probes, maps, name or f"{self.name}|{','.join(probe_ids)}")

    # serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "points": list(self.points),
            "probes": [{"id": p.id, "vertices": list(p.vertices),
                        "edges": [list(e) for e in p.raw_edges],
                        "to_space": dict(p.to_space)} for p in self.probes],
            "maps": [{"id": m.id, "from": m.source, "to": m.target,
                      "vertex_map": dict(m.vertex_map)} for m in self.maps],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def __repr__(self):
        return (f"PlotPresentation({self.name!r}, points={len(self.points)}, "
                f"probes={len(self.probes)}, morphisms={len(self.morphisms)})")


def presentation_from_json(data: dict, name: str = "") -> PlotPresentation:
    try:
        points = [str(x) for x in data["points"]]
        probes = []
        for p in data["probes"]:
            edges = tuple(tuple(str(v) for v in e) for e in p.get("edges", []))
            if any(len(e) != 2 for e in edges):
                raise MalformedInputError(f"probe {p['id']!r} has an edge that is not a pair")
            graph = ProbeGraph(tuple(str(v) for v in p["vertices"]), frozenset(edges))
            probes.append(Probe(str(p["id"]), graph,
                                {str(k): str(v) for k, v in p["to_space"].items()}, edges))
        maps = [ProbeMap(str(m["id"]), str(m["from"]), str(m["to"]),
                         {str(k): str(v) for k, v in m["vertex_map"].items()})
                for m in data.get("maps", [])]
    except (KeyError, TypeError, AttributeError) as exc:
        raise MalformedInputError(f"presentation is missing a field: {exc}") from exc
    except ValueError as exc:
        raise MalformedInputError(str(exc)) from exc
    return PlotPresentation(points, probes, maps, name)


def load_presentation(path) -> PlotPresentation:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: not valid JSON ({exc})") from exc
    return presentation_from_json(data, path.stem)


def save_presentation(P: PlotPresentation, path) -> None:
    Path(path).write_text(P.dumps(), encoding="utf-8")


# validation ---------------------------------------------------------------

@dataclass
class Report:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_presentation(P: PlotPresentation) -> Report:
    rep = Report()
    covered = set()
    for p in P.probes:
        covered.update(p.to_space.values())
    missing = [x for x in P.points if x not in covered]
    if missing:
        rep.violations.append(f"labelings miss points {missing}")
    for m in P.morphisms:
        s, t = P.probes[m.src], P.probes[m.tgt]
        for v, w in zip(s.vertices, m.vmap):
            tv = t.vertices[w]
            if s.to_space[v] != t.to_space[tv]:
                rep.violations.append(
                    f"map {m.id}: vertex {v} ({s.to_space[v]}) goes to {tv} ({t.to_space[tv]}); "
                    "labels do not commute")
                break
        vmap = {v: t.vertices[w] for v, w in zip(s.vertices, m.vmap)}
        if not s.graph.is_graph_map(t.graph, vmap):
            rep.violations.append(f"map {m.id}: an edge of {s.id} is neither kept nor collapsed")
            continue
        _, cs = s.graph.components()
        _, ct = t.graph.components()
        img = {}
        for i, w in enumerate(m.vmap):
            if img.setdefault(int(cs[i]), int(ct[w])) != int(ct[w]):
                rep.violations.append(f"map {m.id}: a component of {s.id} spreads over components")
                break
    for k, p in enumerate(P.probes):
        if P.alias.get(f"id_{p.id}") is None:
            rep.violations.append(f"no identity on {p.id}")
    for (a, b), h in P.composites.items():
        g, f = P.morphisms[a], P.morphisms[b]
        if P.morphisms[h].vmap != tuple(g.vmap[v] for v in f.vmap):
            rep.violations.append(f"composite {g.id}∘{f.id} recorded incorrectly")
    return rep


# builders ---------------------------------------------------------------------

def _simplex_name(s) -> str:
    return "|".join(str(v) for v in s)


def build_presentation_from_complex(simplices, name: str = "") -> PlotPresentation:
    """Star-cover presentation of an abstract simplicial complex K.

    Points are the simplices of K (the vertices of its barycentric
    subdivision). For each simplex σ there is a probe st(σ) on the simplices
    containing σ, with an edge τ - τ' whenever τ is a facet-chain face of τ'
    (the barycentric 1-skeleton). st(σ) is the intersection of the vertex
    stars of σ's vertices, so vertex stars and all their nonempty
    intersections occur. Maps are the inclusions st(σ') -> st(σ), σ ⊆ σ'.
    """
    faces = set()
    for s in simplices:
        s = tuple(sorted(s))
        if not s:
            continue
        for r in range(1, len(s) + 1):
            faces.update(combinations(s, r))
    if not faces:
        raise MalformedInputError("empty simplicial complex")
    faces = sorted(faces, key=lambda s: (len(s), s))
    names = {s: _simplex_name(s) for s in faces}
    star = {s: [t for t in faces if set(s) <= set(t)] for s in faces}
    probes = []
    for s in faces:
        verts = star[s]
        edges = tuple((names[a], names[b]) for a in verts for b in verts
                      if len(a) < len(b) and set(a) <= set(b))
        graph = ProbeGraph(tuple(names[t] for t in verts), frozenset(edges))
        probes.append(Probe(f"st({names[s]})", graph, {names[t]: names[t] for t in verts}, edges))
    maps = []
    for big in faces:
        for small in faces:
            if small != big and set(small) <= set(big):
                maps.append(ProbeMap(f"st({names[big]})<st({names[small]})",
                                     f"st({names[big]})", f"st({names[small]})",
                                     {names[t]: names[t] for t in star[big]}))
    return PlotPresentation([names[s] for s in faces], probes, maps, name or "complex")


# nebula, QX -------------------------------------------------------------------

@dataclass
class Nebula:
    names: list
    probe_of: np.ndarray
    local: np.ndarray
    labels: np.ndarray
    edges: tuple
    components: np.ndarray
    n_components: int
    offsets: np.ndarray

    def __len__(self):
        return len(self.names)

    def census(self) -> dict:
        return {"vertices": len(self.names), "components": self.n_components}


def nebula(P: PlotPresentation) -> Nebula:
    names, probe_of, local, labels, comps = [], [], [], [], []
    eu, ev = [], []
    offsets = [0]
    cbase = 0
    for k, p in enumerate(P.probes):
        off = offsets[-1]
        n = len(p.vertices)
        names += [f"{p.id}:{v}" for v in p.vertices]
        probe_of += [k] * n
        local += list(range(n))
        labels += P.labels(k).tolist()
        u, v = p.graph.edge_index_arrays()
        eu += (u + off).tolist()
        ev += (v + off).tolist()
        nc, c = p.graph.components()
        comps += (c + cbase).tolist()
        cbase += nc
        offsets.append(off + n)
    return Nebula(names, np.array(probe_of, dtype=IDX), np.array(local, dtype=IDX),
                  np.array(labels, dtype=IDX), (np.array(eu, dtype=IDX), np.array(ev, dtype=IDX)),
                  np.array(comps, dtype=IDX), cbase, np.array(offsets, dtype=IDX))


def q_resolution(P: PlotPresentation, n_max: int, cap: int = SIMPLEX_CAP) -> TruncatedSimplicialSet:
    """QX: degree k is ∐ over k-chains of probe maps of the first probe's vertices."""
    sizes = [len(p.vertices) for p in P.probes]
    fmaps = [np.array(m.vmap, dtype=IDX) for m in P.morphisms]
    fcomps = [p.graph.components()[1] for p in P.probes]
    X = nerve_of_elements(P.category, sizes, fmaps, fcomps, n_max, cap, name="QX",
                          vertex_names=[p.vertices for p in P.probes])
    B = nebula(P)
    X.meta["augmentation"] = B.labels.copy()
    return X


def augmentation_commutes(P: PlotPresentation, X: TruncatedSimplicialSet) -> bool:
    aug = X.meta["augmentation"]
    if X.n_max < 1:
        return True
    return bool(np.all(aug[X.faces[1][0]] == aug[X.faces[1][1]]))


# gauge monoid -------------------------------------------------------------------

@dataclass
class GaugeMonoid:
    elements: list  # tuples: image of each nebula vertex
    identity: int
    index: dict
    closure_checked: str = "exhaustive"

    def __len__(self):
        return len(self.elements)

    def compose(self, a: int, b: int) -> int:
        """a∘b (apply b first)."""
        ea, eb = self.elements[a], self.elements[b]
        return self.index[tuple(ea[v] for v in eb)]

    def table(self) -> np.ndarray:
        n = len(self.elements)
        E = np.array(self.elements, dtype=IDX)
        out = np.empty((n, n), dtype=IDX)
        for a in range(n):
            comp = E[a][E]  # row b: a∘b
            out[a] = [self.index[tuple(r)] for r in comp.tolist()]
        return out


def _component_maps(B: Nebula, members: list, nbrs: list, by_label: dict, limit: int):
    """All label-preserving graph maps from one connected component into B."""
    order = [members[0]]
    seen = {members[0]}
    for v in order:
        for w in sorted(nbrs[v]):
            if w in seen or w not in set(members):
                continue
            seen.add(w)
            order.append(w)
    out = []
    assign = {}

    def rec(i):
        if len(out) > limit:
            return
        if i == len(order):
            out.append(tuple(assign[v] for v in members))
            return
        v = order[i]
        for c in by_label[int(B.labels[v])]:
            ok = True
            for w in nbrs[v]:
                if w in assign and assign[w] != c and c not in nbrs[assign[w]]:
                    ok = False
                    break
            if ok:
                assign[v] = c
                rec(i + 1)
                del assign[v]

    rec(0)
    return out


def gauge_monoid(P: PlotPresentation, cap: int = GAUGE_CAP, seed: int = 0,
                 exhaustive_limit: int = 1_000_000) -> GaugeMonoid:
    """Label-preserving, component-respecting graph endomorphisms of the nebula."""
    B = nebula(P)
    n = len(B)
    nbrs = [set() for _ in range(n)]
    for a, b in zip(*(e.tolist() for e in B.edges)):
        nbrs[a].add(b)
        nbrs[b].add(a)
    by_label: dict = {}
    for v in range(n):
        by_label.setdefault(int(B.labels[v]), []).append(v)
    groups = [[] for _ in range(B.n_components)]
    for v in range(n):
        groups[int(B.components[v])].append(v)
    choices = []
    total = 1
    for members in groups:
        maps = _component_maps(B, members, nbrs, by_label, cap)
        total *= len(maps)
        if total > cap:
            raise ResourceCapError("gauge monoid elements", total, cap)
        choices.append((members, maps))
    elements = []
    for combo in _product_lists([c[1] for c in choices]):
        img = [0] * n
        for (members, _), m in zip(choices, combo):
            for v, w in zip(members, m):
                img[v] = w
        elements.append(tuple(img))
    elements.sort()
    index = {e: i for i, e in enumerate(elements)}
    ident = index[tuple(range(n))]
    M = GaugeMonoid(elements, ident, index)
    _check_monoid(M, seed, exhaustive_limit)
    return M


def _product_lists(lists):
    if not lists:
        yield ()
        return
    first, rest = lists[0], lists[1:]
    for x in first:
        for tail in _product_lists(rest):
            yield (x,) + tail


def _check_monoid(M: GaugeMonoid, seed: int, limit: int):
    n = len(M)
    rng = np.random.default_rng(seed)
    if n ** 2 <= limit:
        pairs = [(a, b) for a in range(n) for b in range(n)]
    else:
        M.closure_checked = "sampled"
        pairs = [tuple(rng.integers(0, n, 2).tolist()) for _ in range(min(limit, 20_000))]
    for a, b in pairs:
        e = tuple(M.elements[a][v] for v in M.elements[b])
        if e not in M.index:
            raise ModelError("gauge monoid is not closed under composition")
    if n ** 3 <= limit:
        triples = [(a, b, c) for a in range(n) for b in range(n) for c in range(n)]
    else:
        triples = [tuple(rng.integers(0, n, 3).tolist()) for _ in range(min(limit, 20_000))]
    for a, b, c in triples:
        if M.compose(M.compose(a, b), c) != M.compose(a, M.compose(b, c)):
            raise ModelError("gauge monoid composition is not associative")
    for a in range(n):
        if M.compose(a, M.identity) != a or M.compose(M.identity, a) != a:
            raise ModelError("gauge monoid identity law fails")


def verify_action(B: Nebula, M: GaugeMonoid) -> list[str]:
    out = []
    nbr = {(int(a), int(b)) for a, b in zip(*B.edges)}
    nbr |= {(b, a) for a, b in nbr}
    for k, e in enumerate(M.elements):
        if len(e) != len(B):
            out.append(f"element {k} has the wrong length")
            continue
        if any(B.labels[e[v]] != B.labels[v] for v in range(len(B))):
            out.append(f"element {k} does not commute with the projection")
        if any(e[a] != e[b] and (e[a], e[b]) not in nbr for a, b in nbr):
            out.append(f"element {k} is not a graph map")
    return out


def bar_construction(B: Nebula, M: GaugeMonoid, n_max: int, cap: int = SIMPLEX_CAP,
                     ) -> TruncatedSimplicialSet:
    """B//M: degree k is B × M^k; d_0 acts, middle faces multiply, d_k drops.

    M is treated as discrete, so the components of degree k are
    components(B) × M^k.
    """
    bad = verify_action(B, M)
    if bad:
        raise ModelError(f"not a monoid action on the nebula: {bad[0]}")
    nm = len(M)
    total = len(B) * nm ** n_max
    if total > cap:
        raise ResourceCapError(f"B//M simplices in degree {n_max}", total, cap)
    mul = M.table()
    C = one_object_category([f"m{i}" for i in range(nm)], mul, M.identity)
    fmaps = [np.array(e, dtype=IDX) for e in M.elements]
    X = nerve_of_elements(C, [len(B)], fmaps, [B.components], n_max, cap, name="B//M",
                          vertex_names=[B.names])
    X.meta["augmentation"] = B.labels.copy()
    return X


# φ / ψ comparison --------------------------------------------------------------

def phi_psi_compare(P: PlotPresentation, n_max: int, cap: int = GAUGE_CAP) -> dict:
    """Test, degree by degree, whether the chain-to-coproduct map QX -> B//M
    is well defined and inverse to restriction.

    φ_k(b, f_{k-1}, ..., f_0) takes, in each position, the coproduct of all
    probe maps occurring there across N_k. That coproduct is an endomorphism
    of B exactly when every probe is the source of one map in that position.
    """
    B = nebula(P)
    M = gauge_monoid(P, cap)
    Q = q_resolution(P, n_max)
    chains = Q.meta["chains"]
    report = {"presentation": P.name, "nebula": B.census(), "gauge_monoid": len(M), "degrees": []}
    for k in range(n_max + 1):
        entry = {"degree": k, "qx_size": Q.sizes[k],
                 "qx_nondegenerate": int(Q.nondegenerate_mask(k).sum()),
                 "bm_size": len(B) * len(M) ** k}
        entry["cardinalities_match"] = entry["qx_size"] == entry["bm_size"]
        positions = []
        coproducts = []
        L = chains[k] if k else np.zeros((len(P.probes), 0), dtype=IDX)
        for pos in range(k):
            per_probe: dict = {}
            for m in set(L[:, pos].tolist()):
                per_probe.setdefault(P.morphisms[m].src, set()).add(m)
            conflicts = sorted(P.probes[s].id for s, ms in per_probe.items() if len(ms) > 1)
            missing = sorted(p.id for i, p in enumerate(P.probes) if i not in per_probe)
            positions.append({"position": pos, "conflicting_probes": conflicts,
                              "probes_without_map": missing})
            if not conflicts and not missing:
                img = [0] * len(B)
                for s, ms in per_probe.items():
                    m = P.morphisms[next(iter(ms))]
                    for v, w in enumerate(m.vmap):
                        img[B.offsets[s] + v] = int(B.offsets[m.tgt] + w)
                coproducts.append(tuple(img))
            else:
                coproducts.append(None)
        well = all(c is not None for c in coproducts)
        entry["positions"] = positions
        entry["phi_well_defined"] = well
        in_m = well and all(c in M.index for c in coproducts)
        entry["phi_lands_in_M"] = in_m
        if well and in_m:
            # φ is constant in the chain: it is injective only if each vertex has one chain
            image = set()
            for x in range(Q.sizes[k]):
                probe = Q.meta["first_object"][k][Q.meta["simplex_chain"][k][x]]
                b = int(B.offsets[probe] + Q.meta["simplex_vertex"][k][x])
                image.add((b,) + tuple(M.index[c] for c in coproducts))
            entry["psi_phi_identity"] = len(image) == Q.sizes[k]
            entry["phi_psi_identity"] = len(image) == entry["bm_size"]
        else:
            entry["psi_phi_identity"] = None
            entry["phi_psi_identity"] = None
        entry["psi_defined"] = _psi_defined(P, B, M, k)
        entry["iso"] = bool(entry["psi_phi_identity"] and entry["phi_psi_identity"])
        report["degrees"].append(entry)
    report["iso_all_degrees"] = all(e["iso"] for e in report["degrees"])
    return report


def _psi_defined(P, B, M, k) -> bool:
    """Restrictions m|U land on probe maps of the presentation for every
    element and probe (so ψ is defined in every degree >= 1)."""
    if k == 0:
        return True
    keys = {(m.src, m.tgt, m.vmap) for m in P.morphisms}
    for e in M.elements:
        for s, p in enumerate(P.probes):
            lo, hi = int(B.offsets[s]), int(B.offsets[s + 1])
            img = e[lo:hi]
            tgts = {int(B.probe_of[w]) for w in img}
            if len(tgts) != 1:
                return False
            t = tgts.pop()
            vmap = tuple(int(B.local[w]) for w in img)
            if (s, t, vmap) not in keys:
                return False
    return True


# Čech nerve of the nebula ------------------------------------------------------------

def cech_of_nebula(P: PlotPresentation, n_max: int, cap: int = SIMPLEX_CAP) -> TruncatedSimplicialSet:
    B = nebula(P)
    X = cech_nerve(B.labels, len(P.points), n_max, edges=B.edges, cap=cap, vertex_names=B.names)
    X.name = "Cech"
    return X


def unglued_points(P: PlotPresentation) -> list:
    """Points whose nebula fiber is not connected by the relation u ~ f(u).

    Gluing ∐ U_p × G along probe maps gives one G-orbit over x exactly when
    x is not listed here.
    """
    B = nebula(P)
    u, v = [], []
    for m in P.morphisms:
        for a, b in enumerate(m.vmap):
            u.append(int(B.offsets[m.src] + a))
            v.append(int(B.offsets[m.tgt] + b))
    _, lab = component_labels(len(B), np.array(u, dtype=IDX), np.array(v, dtype=IDX))
    out = []
    for x, name in enumerate(P.points):
        if len(set(lab[B.labels == x].tolist())) > 1:
            out.append(name)
    return out


def path_components(P: PlotPresentation) -> int:
    return len(pi0(q_resolution(P, 1)))

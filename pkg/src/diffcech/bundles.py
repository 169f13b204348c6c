"""Finite groups, plot cocycles and the principal bundles they glue together.

A plot cocycle assigns to every non-identity probe map f: U_{p1} -> U_{p0} a
component-constant function g_f: U_{p1} -> G with
    g_{f0∘f1}(x) = g_{f0}(f1(x)) · g_{f1}(x).
A cocycle morphism h (one component-constant h_p per probe) sends g to
    g'_f = (h_{p0}∘f) · g_f · h_{p1}^{-1}.
The total space of the bundle of g is ∐ U_p × G modulo
(p1, u, k) ~ (p0, f(u), g_f(u) k), with G acting on the right.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations, product
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .abelian import FgAbGroup
from .errors import (ConsistencyError, MalformedInputError, ModelError, ResourceCapError)
from .graphs import ProbeGraph, component_labels
from .simplicial import (IDX, FinGroupoid, SimplicialMap, TruncatedSimplicialSet,
                         nerve, one_object_category)
from .site import PlotPresentation, Report, unglued_points

COCYCLE_CAP = 1_000_000
GROUPOID_CAP = 1_000_000
BRUTE_FORCE_CAP = 200_000


# finite groups -----------------------------------------------------------------

class FiniteGroup:
    """Group on 0..n-1 with mul[a, b] = a·b; axioms are checked exhaustively."""

    def __init__(self, names, mul, unit: int, name: str = ""):
        self.names = tuple(str(x) for x in names)
        self.mul = np.asarray(mul, dtype=IDX)
        self.unit = int(unit)
        self.name = name
        n = len(self.names)
        if len(set(self.names)) != n:
            raise MalformedInputError("duplicate group element names")
        if self.mul.shape != (n, n) or np.any((self.mul < 0) | (self.mul >= n)):
            raise MalformedInputError("multiplication table is not closed")
        r = np.arange(n)
        if np.any(self.mul[self.unit] != r) or np.any(self.mul[:, self.unit] != r):
            raise MalformedInputError("unit law fails")
        # mul[mul][a, b, c] = (ab)c and mul[:, mul][a, b, c] = a(bc)
        if not np.array_equal(self.mul[self.mul], self.mul[:, self.mul]):
            raise MalformedInputError("multiplication is not associative")
        hit = self.mul == self.unit
        if np.any(hit.sum(axis=1) != 1):
            raise MalformedInputError("some element has no inverse")
        self.inv = np.argmax(hit, axis=1).astype(IDX)
        if np.any(self.mul[self.inv, r] != self.unit):
            raise MalformedInputError("left and right inverses differ")
        self._index = {x: i for i, x in enumerate(self.names)}

    @property
    def order(self) -> int:
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def index(self, name) -> int:
        try:
            return self._index[str(name)]
        except KeyError:
            raise MalformedInputError(f"{name!r} is not an element of {self.name or 'the group'}")

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def element_orders(self) -> np.ndarray:
        n = self.order
        out = np.zeros(n, dtype=IDX)
        for a in range(n):
            x, k = a, 1
            while x != self.unit:
                x = int(self.mul[x, a])
                k += 1
            out[a] = k
        return out

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    @staticmethod
    def cyclic(n: int) -> "FiniteGroup":
        if n < 1:
            raise MalformedInputError("cyclic group order must be positive")
        r = np.arange(n)
        return FiniteGroup([str(i) for i in r], (r[:, None] + r[None, :]) % n, 0, f"Z/{n}")

    @staticmethod
    def symmetric(n: int) -> "FiniteGroup":
        if n < 1:
            raise MalformedInputError("symmetric group degree must be positive")
        perms = list(permutations(range(n)))
        pos = {p: i for i, p in enumerate(perms)}
        # (a·b)(i) = a(b(i)): apply b first
        mul = [[pos[tuple(a[b[i]] for i in range(n))] for b in perms] for a in perms]
        names = ["".join(str(i) for i in p) for p in perms]
        return FiniteGroup(names, mul, 0, f"S{n}")

    @staticmethod
    def from_json(data: dict, name: str = "") -> "FiniteGroup":
        if not isinstance(data, dict):
            raise MalformedInputError("group file must be a JSON object")
        if "cyclic" in data:
            return FiniteGroup.cyclic(int(data["cyclic"]))
        if "symmetric" in data:
            return FiniteGroup.symmetric(int(data["symmetric"]))
        try:
            names = [str(x) for x in data["elements"]]
            pos = {x: i for i, x in enumerate(names)}
            mul = np.full((len(names), len(names)), -1, dtype=IDX)
            for key, val in data["mul"].items():
                a, b = (s.strip() for s in key.split(","))
                mul[pos[a], pos[b]] = pos[str(val)]
            unit = pos[str(data["unit"])]
        except (KeyError, ValueError, AttributeError) as exc:
            raise MalformedInputError(f"bad group description: {exc}") from exc
        if np.any(mul < 0):
            raise MalformedInputError("multiplication table is incomplete")
        return FiniteGroup(names, mul, unit, name)

    def to_json(self) -> dict:
        return {"elements": list(self.names), "unit": self.names[self.unit],
                "mul": {f"{a},{b}": self.names[self.mul[i, j]]
                        for i, a in enumerate(self.names) for j, b in enumerate(self.names)}}


def parse_group(desc) -> FiniteGroup:
    """A group from a JSON file path, a dict, or a short name like Z3 / S3."""
    if isinstance(desc, FiniteGroup):
        return desc
    if isinstance(desc, dict):
        return FiniteGroup.from_json(desc)
    text = str(desc).strip()
    path = Path(text)
    if path.suffix == ".json" or path.is_file():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedInputError(f"cannot read group file {text}: {exc}") from exc
        return FiniteGroup.from_json(data, path.stem)
    key = text.upper().replace("/", "").replace("ℤ", "Z")
    if key.startswith("Z") and key[1:].isdigit():
        return FiniteGroup.cyclic(int(key[1:]))
    if key.startswith("S") and key[1:].isdigit():
        return FiniteGroup.symmetric(int(key[1:]))
    raise MalformedInputError(f"cannot parse group {text!r}")


# BG and EG ---------------------------------------------------------------------

def bg_nerve(G: FiniteGroup, n_max: int) -> TruncatedSimplicialSet:
    return nerve(one_object_category(G.names, G.mul, G.unit, groupoid=True), n_max, name="BG")


def _translation_groupoid(G: FiniteGroup) -> FinGroupoid:
    """Objects G, one arrow a -> b for every pair."""
    n = G.order
    src = np.repeat(np.arange(n), n)
    tgt = np.tile(np.arange(n), n)
    comps = {(b * n + c, a * n + b): a * n + c for a in range(n) for b in range(n) for c in range(n)}
    names = [f"{G.names[a]}->{G.names[b]}" for a in range(n) for b in range(n)]
    return FinGroupoid(list(G.names), names, src, tgt, np.arange(n) * n + np.arange(n), comps)


def eg_nerve(G: FiniteGroup, n_max: int) -> TruncatedSimplicialSet:
    return nerve(_translation_groupoid(G), n_max, name="EG")


def eg_to_bg(G: FiniteGroup, n_max: int) -> SimplicialMap:
    """The projection EG -> BG, arrow a -> b going to b·a^{-1}."""
    E, B = eg_nerve(G, n_max), bg_nerve(G, n_max)
    n = G.order
    arrow = np.array([G.mul[b, G.inv[a]] for a in range(n) for b in range(n)], dtype=IDX)
    maps = [np.zeros(E.sizes[0], dtype=IDX)]
    for k in range(1, n_max + 1):
        rows = arrow[E.meta["chains"][k]]
        pos = {tuple(r): i for i, r in enumerate(B.meta["chains"][k].tolist())}
        chain_map = np.array([pos[tuple(r)] for r in rows.tolist()], dtype=IDX)
        maps.append(chain_map[E.meta["simplex_chain"][k]])
    F = SimplicialMap(E, B, maps)
    bad = F.verify()
    if bad:
        raise ConsistencyError(f"EG -> BG is not simplicial: {bad[0]}")
    return F


# the cocycle space of a presentation ------------------------------------------------

class CocycleSpace:
    """Slot bookkeeping for component-constant cocycles and gauge elements.

    A cocycle is an integer array over slots (non-identity morphism, source
    component); a gauge element is an array over (probe, component).
    """

    def __init__(self, P: PlotPresentation, G: FiniteGroup):
        self.P, self.G = P, G
        self.comp = [p.graph.components() for p in P.probes]
        self.gauge_offset = np.concatenate([[0], np.cumsum([c[0] for c in self.comp])]).astype(IDX)
        self.n_gauge_slots = int(self.gauge_offset[-1])
        self.moves = P.non_identity_morphisms()
        self.move_pos = {m: i for i, m in enumerate(self.moves)}
        self.img = {}
        for m in range(len(P.morphisms)):
            mor = P.morphisms[m]
            nc, cs = self.comp[mor.src]
            _, ct = self.comp[mor.tgt]
            image = np.full(nc, -1, dtype=IDX)
            for v, w in enumerate(mor.vmap):
                c, t = int(cs[v]), int(ct[w])
                if image[c] >= 0 and image[c] != t:
                    raise ModelError(f"map {mor.id} spreads a component over several components")
                image[c] = t
            self.img[m] = image
        sizes = [self.comp[P.morphisms[m].src][0] for m in self.moves]
        self.offset = np.concatenate([[0], np.cumsum(sizes)]).astype(IDX)
        self.n_slots = int(self.offset[-1])
        # pairs of non-identity morphisms with their composite
        self.pairs = [(a, b, h) for (a, b), h in sorted(P.composites.items())
                      if a in self.move_pos and b in self.move_pos]
        composite_of = {}
        for a, b, h in self.pairs:
            if h in self.move_pos:
                composite_of.setdefault(h, (a, b))
        self.irreducible = [m for m in self.moves if m not in composite_of]
        # derivation order for the rest
        known = set(self.irreducible)
        self.derivation = []
        pending = [m for m in self.moves if m not in known]
        while pending:
            progress = False
            for h in list(pending):
                for a, b, hh in self.pairs:
                    if hh == h and a in known and b in known:
                        self.derivation.append((h, a, b))
                        known.add(h)
                        pending.remove(h)
                        progress = True
                        break
            if not progress:
                # only cyclic decompositions left (an idempotent e = e∘e, say):
                # make the first stuck morphism a free slot; the law check keeps it honest
                h = pending.pop(0)
                self.irreducible.append(h)
                known.add(h)
        self.irreducible.sort(key=self.move_pos.__getitem__)
        self.irr_slots = np.concatenate(
            [np.arange(self.offset[self.move_pos[m]], self.offset[self.move_pos[m] + 1])
             for m in self.irreducible] or [np.zeros(0, dtype=IDX)]).astype(IDX)

    # slots --------------------------------------------------------------

    def slots(self, m: int) -> slice:
        i = self.move_pos[m]
        return slice(int(self.offset[i]), int(self.offset[i + 1]))

    def gslots(self, p: int) -> slice:
        return slice(int(self.gauge_offset[p]), int(self.gauge_offset[p + 1]))

    @property
    def n_candidates(self) -> int:
        return self.G.order ** len(self.irr_slots)

    @property
    def gauge_order(self) -> int:
        return self.G.order ** self.n_gauge_slots

    def value(self, V: np.ndarray, m: int) -> np.ndarray:
        """Values of morphism m on its source components, (N, nc) for V of shape (N, slots)."""
        if m in self.move_pos:
            return V[:, self.slots(m)]
        nc = self.comp[self.P.morphisms[m].src][0]
        return np.full((V.shape[0], nc), self.G.unit, dtype=IDX)

    def derive(self, V: np.ndarray) -> np.ndarray:
        mul = self.G.mul
        for h, a, b in self.derivation:
            V[:, self.slots(h)] = mul[self.value(V, a)[:, self.img[b]], self.value(V, b)]
        return V

    def law_ok(self, V: np.ndarray) -> np.ndarray:
        mul = self.G.mul
        ok = np.ones(V.shape[0], dtype=bool)
        for a, b, h in self.pairs:
            rhs = mul[self.value(V, a)[:, self.img[b]], self.value(V, b)]
            ok &= np.all(self.value(V, h) == rhs, axis=1)
        return ok

    def law_violations(self, V: np.ndarray) -> list[str]:
        mul = self.G.mul
        out = []
        mors = self.P.morphisms
        for a, b, h in self.pairs:
            lhs = self.value(V, h)[0]
            rhs = mul[self.value(V, a)[0][self.img[b]], self.value(V, b)[0]]
            for c in np.nonzero(lhs != rhs)[0]:
                out.append(f"g[{mors[h].id}] = {self.G.names[lhs[c]]} on component {c} of "
                           f"{self.P.probes[mors[b].src].id}, but g[{mors[a].id}]∘{mors[b].id} · "
                           f"g[{mors[b].id}] = {self.G.names[rhs[c]]}")
        return out

    def act(self, H: np.ndarray, V: np.ndarray) -> np.ndarray:
        """Gauge action g'_f = (h_{p0}∘f) g_f h_{p1}^{-1}; H and V broadcast over rows."""
        mul, inv = self.G.mul, self.G.inv
        H = np.atleast_2d(H)
        V = np.atleast_2d(V)
        n = max(H.shape[0], V.shape[0])
        out = np.empty((n, self.n_slots), dtype=IDX)
        for m in self.moves:
            mor = self.P.morphisms[m]
            h_tgt = H[:, self.gslots(mor.tgt)][:, self.img[m]]
            h_src = H[:, self.gslots(mor.src)]
            out[:, self.slots(m)] = mul[mul[h_tgt, V[:, self.slots(m)]], inv[h_src]]
        return out

    def encode(self, V: np.ndarray) -> np.ndarray:
        """Mixed-radix code of the irreducible slots (first slot most significant)."""
        n = self.G.order
        code = np.zeros(V.shape[0], dtype=np.int64)
        for s in self.irr_slots:
            code = code * n + V[:, s]
        return code

    def decode_irreducible(self, codes: np.ndarray) -> np.ndarray:
        n = self.G.order
        codes = np.asarray(codes, dtype=np.int64)
        V = np.full((len(codes), self.n_slots), self.G.unit, dtype=IDX)
        rest = codes.copy()
        for s in self.irr_slots[::-1]:
            V[:, s] = rest % n
            rest //= n
        return self.derive(V)

    def gauge_elements(self, cap: int = COCYCLE_CAP) -> np.ndarray:
        if self.gauge_order > cap:
            raise ResourceCapError("gauge transformations", self.gauge_order, cap)
        return _mixed_radix(self.G.order, self.n_gauge_slots)

    def gauge_mul(self, H1: np.ndarray, H2: np.ndarray) -> np.ndarray:
        return self.G.mul[H1, H2]


def _mixed_radix(base: int, width: int) -> np.ndarray:
    n = base ** width
    codes = np.arange(n, dtype=np.int64)
    out = np.empty((n, width), dtype=IDX)
    for j in range(width - 1, -1, -1):
        out[:, j] = codes % base
        codes //= base
    return out


@dataclass
class PlotCocycle:
    space: CocycleSpace
    values: np.ndarray  # (n_slots,)

    def on(self, m: int) -> np.ndarray:
        return self.space.value(self.values.reshape(1, -1), m)[0]

    def to_json(self) -> dict:
        S = self.space
        names = S.G.names
        return {"labels": {S.P.morphisms[m].id: {str(c): names[v] for c, v in enumerate(self.on(m))}
                           for m in S.moves}}

    @property
    def code(self) -> int:
        return int(self.space.encode(self.values.reshape(1, -1))[0])


def trivial_cocycle(P: PlotPresentation, G: FiniteGroup, space: CocycleSpace | None = None) -> PlotCocycle:
    S = space or CocycleSpace(P, G)
    return PlotCocycle(S, np.full(S.n_slots, G.unit, dtype=IDX))


def cocycle_from_labels(P: PlotPresentation, G: FiniteGroup, labels: dict,
                        space: CocycleSpace | None = None, derive: bool = True) -> PlotCocycle:
    """Labels {map_id: {component_index: element}}; unspecified generators get the
    unit, unspecified composites are derived from the composition law."""
    S = space or CocycleSpace(P, G)
    V = np.full((1, S.n_slots), G.unit, dtype=IDX)
    given = set()
    for mid, per in labels.items():
        if mid not in P.alias and mid not in [m.id for m in P.morphisms]:
            raise MalformedInputError(f"cocycle labels unknown map {mid!r}")
        m = P.alias.get(mid)
        if m is None:
            m = next(i for i, mor in enumerate(P.morphisms) if mor.id == mid)
        if m not in S.move_pos:
            raise MalformedInputError(f"map {mid!r} is an identity; its label is always the unit")
        if not isinstance(per, dict):
            raise MalformedInputError(f"labels of {mid!r} must be keyed by component")
        sl = S.slots(m)
        nc = sl.stop - sl.start
        for key, val in per.items():
            try:
                c = int(key)
            except (TypeError, ValueError):
                raise MalformedInputError(
                    f"labels of {mid!r} use key {key!r}; cocycles are keyed by component index, "
                    "vertexwise labels are not accepted") from None
            if not 0 <= c < nc:
                raise MalformedInputError(f"map {mid!r} has no source component {c}")
            V[0, sl.start + c] = G.index(val)
            given.add(m)
    if derive:
        mul = G.mul
        for h, a, b in S.derivation:
            if h not in given:
                V[:, S.slots(h)] = mul[S.value(V, a)[:, S.img[b]], S.value(V, b)]
    return PlotCocycle(S, V[0])


def load_cocycle(P: PlotPresentation, G: FiniteGroup, path_or_data, space=None) -> PlotCocycle:
    data = path_or_data
    if not isinstance(data, dict):
        try:
            data = json.loads(Path(path_or_data).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedInputError(f"cannot read cocycle: {exc}") from exc
    if "labels" not in data or not isinstance(data["labels"], dict):
        raise MalformedInputError('cocycle file needs a "labels" object')
    return cocycle_from_labels(P, G, data["labels"], space)


def verify_plot_cocycle(P: PlotPresentation, G: FiniteGroup, g: PlotCocycle) -> Report:
    S = g.space
    rep = Report()
    v = g.values
    if np.any((v < 0) | (v >= G.order)):
        rep.violations.append("labels outside the group")
        return rep
    rep.violations += S.law_violations(v.reshape(1, -1))
    return rep


def enumerate_cocycles(P: PlotPresentation, G: FiniteGroup, cap: int = COCYCLE_CAP,
                       space: CocycleSpace | None = None) -> tuple[CocycleSpace, np.ndarray]:
    """All valid cocycles as rows, sorted by code (lexicographic in the irreducible slots)."""
    S = space or CocycleSpace(P, G)
    if S.n_candidates > cap:
        raise ResourceCapError("cocycle candidates", S.n_candidates, cap)
    V = S.decode_irreducible(np.arange(S.n_candidates))
    return S, V[S.law_ok(V)]


# bundles -------------------------------------------------------------------------

@dataclass
class BundleModel:
    G: FiniteGroup
    points: list
    proj: np.ndarray
    act: np.ndarray  # act[x, a] = x·a
    components: np.ndarray
    edges: tuple
    names: list = field(default_factory=list)
    lifts: dict | None = None  # probe index -> (n_vertices, |G|) array, [p, u, k]

    def __len__(self):
        return len(self.proj)

    @property
    def n_components(self) -> int:
        return int(self.components.max()) + 1 if len(self.components) else 0

    def census(self) -> dict:
        return {"elements": len(self), "components": self.n_components,
                "points": len(self.points), "expected_elements": len(self.points) * self.G.order}

    def neighbor_sets(self) -> list[set]:
        nb = [set() for _ in range(len(self))]
        for a, b in zip(*(e.tolist() for e in self.edges)):
            nb[a].add(b)
            nb[b].add(a)
        return nb


def _union_labels(n, u, v):
    if n == 0:
        return np.zeros(0, dtype=IDX)
    _, lab = component_labels(n, np.asarray(u, dtype=IDX), np.asarray(v, dtype=IDX))
    return lab.astype(IDX)


def _quotient_bundle(G, points, node_point, node_h, node_names, rel_u, rel_v, edge_u, edge_v,
                     mult_node, lifts_of):
    """Shared quotient step: nodes ∐ U × G, relation pairs, and intra-patch edges."""
    n = len(node_point)
    cls = _union_labels(n, rel_u, rel_v)
    m = int(cls.max()) + 1
    first = np.full(m, -1, dtype=IDX)
    for i in range(n - 1, -1, -1):
        first[cls[i]] = i
    proj = node_point[first]
    bad_proj = np.nonzero(node_point != proj[cls])[0]
    if len(bad_proj):
        raise ModelError(f"the gluing identifies points over different base points ({node_names[bad_proj[0]]})")
    act = np.empty((m, G.order), dtype=IDX)
    for a in range(G.order):
        moved = cls[mult_node(a)]
        act[:, a] = moved[first]
        if np.any(moved != act[cls, a]):
            raise ModelError("the right G-action is not well defined on the quotient")
    eu, ev = cls[np.asarray(edge_u, dtype=IDX)], cls[np.asarray(edge_v, dtype=IDX)]
    keep = eu != ev
    pairs = sorted({(min(a, b), max(a, b)) for a, b in zip(eu[keep].tolist(), ev[keep].tolist())})
    edges = (np.array([p[0] for p in pairs], dtype=IDX), np.array([p[1] for p in pairs], dtype=IDX))
    comps = _union_labels(m, *edges)
    names = [node_names[i] for i in first]
    lifts = {p: cls[idx] for p, idx in lifts_of.items()}
    return BundleModel(G, list(points), proj, act, comps, edges, names, lifts)


def bundle_from_plot_cocycle(P: PlotPresentation, G: FiniteGroup, g: PlotCocycle,
                             check: bool = True) -> BundleModel:
    if check:
        rep = verify_plot_cocycle(P, G, g)
        if not rep.ok:
            raise ConsistencyError(f"refusing an invalid cocycle: {rep.violations[0]}")
    S = g.space
    nG = G.order
    sizes = [len(p.vertices) for p in P.probes]
    voff = np.concatenate([[0], np.cumsum(sizes)]).astype(IDX)
    nv = int(voff[-1])
    node = lambda p, u, h: (voff[p] + u) * nG + h  # noqa: E731
    node_point = np.repeat(np.concatenate([P.labels(p) for p in range(len(P.probes))]), nG)
    node_h = np.tile(np.arange(nG, dtype=IDX), nv)
    names = [f"[{p.id},{v},{G.names[h]}]" for p in P.probes for v in p.vertices for h in range(nG)]
    ru, rv = [], []
    hs = np.arange(nG, dtype=IDX)
    for m in S.moves:
        mor = P.morphisms[m]
        cs = S.comp[mor.src][1]
        vals = g.on(m)
        for u, w in enumerate(mor.vmap):
            ru.append(node(mor.src, u, hs))
            rv.append(node(mor.tgt, w, G.mul[vals[cs[u]], hs]))
    eu, ev = [], []
    for k, p in enumerate(P.probes):
        a, b = p.graph.edge_index_arrays()
        for h in range(nG):
            eu.append(node(k, a, h))
            ev.append(node(k, b, h))
    cat = lambda xs: np.concatenate(xs).astype(IDX) if xs else np.zeros(0, dtype=IDX)  # noqa: E731
    all_nodes = np.arange(nv * nG, dtype=IDX)
    mult = lambda a: all_nodes - node_h + G.mul[node_h, a]  # noqa: E731
    lifts = {k: node(k, np.arange(sizes[k])[:, None], hs[None, :]) for k in range(len(P.probes))}
    return _quotient_bundle(G, P.points, node_point, node_h, names, cat(ru), cat(rv), cat(eu), cat(ev),
                            mult, lifts)


# principality ------------------------------------------------------------------------

def _pullback_section(P: PlotPresentation, B: BundleModel, q: int, nb: list):
    """A section of the pullback along probe q: the canonical lift [q,u,e] when the
    model carries lifts, otherwise a graph-respecting section found by search."""
    G = B.G
    probe = P.probes[q]
    labels = P.labels(q)
    if B.lifts is not None and q in B.lifts:
        return B.lifts[q][:, G.unit]
    fibers = {}
    for x in range(len(B)):
        fibers.setdefault(int(B.proj[x]), []).append(x)
    nbr = probe.graph.neighbors()
    ncomp, comps = probe.graph.components()
    sec = [-1] * len(probe.vertices)
    for c in range(ncomp):
        members = [v for v in range(len(probe.vertices)) if comps[v] == c]
        order = [members[0]]
        for v in order:
            for w in sorted(nbr[v]):
                if w not in order:
                    order.append(w)

        def rec(i):
            if i == len(order):
                return True
            v = order[i]
            for e in fibers.get(int(labels[v]), []):
                if all(sec[w] < 0 or sec[w] == e or sec[w] in nb[e] for w in nbr[v]):
                    sec[v] = e
                    if rec(i + 1):
                        return True
                    sec[v] = -1
            return False

        if not rec(0):
            return None
    return np.array(sec, dtype=IDX)


def verify_principal(P: PlotPresentation, B: BundleModel) -> Report:
    rep = Report()
    G = B.G
    n, nG = len(B), G.order
    x = np.arange(n)
    if np.any(B.act[:, G.unit] != x):
        rep.violations.append("the unit does not act trivially")
    for a in range(nG):
        for b in range(nG):
            bad = np.nonzero(B.act[B.act[:, a], b] != B.act[:, G.mul[a, b]])[0]
            if len(bad):
                rep.violations.append(f"(x·{G.names[a]})·{G.names[b]} != x·({G.names[a]}{G.names[b]}) "
                                      f"at {B.names[bad[0]] if B.names else bad[0]}")
                return rep
        bad = np.nonzero(B.proj[B.act[:, a]] != B.proj)[0]
        if len(bad):
            rep.violations.append(f"projection not invariant under {G.names[a]}")
            return rep
    # (p, g) -> (p, p·g) onto the fiber product
    pairs = set(zip(np.repeat(x, nG).tolist(), B.act.ravel().tolist()))
    fiber = np.bincount(B.proj, minlength=len(B.points))
    if len(pairs) != n * nG:
        for e in range(n):
            row = B.act[e].tolist()
            if len(set(row)) < nG:
                rep.violations.append(f"(p,g) -> (p,p·g) is not injective at "
                                      f"{B.names[e] if B.names else e}: the action is not free")
                break
        return rep
    if int((fiber.astype(np.int64) ** 2).sum()) != len(pairs):
        worst = int(np.argmax(fiber != nG))
        rep.violations.append(f"(p,g) -> (p,p·g) misses part of the fiber product: the fiber over "
                              f"{B.points[worst]} has {fiber[worst]} points, not one orbit of {nG}")
        return rep
    if np.any(fiber == 0):
        rep.violations.append(f"empty fiber over {B.points[int(np.argmin(fiber))]}")
        return rep
    # per-probe trivializations of the pullback
    nb = B.neighbor_sets()
    for q, probe in enumerate(P.probes):
        sec = _pullback_section(P, B, q, nb)
        if sec is None:
            rep.violations.append(f"no section of the pullback along {probe.id}")
            continue
        labels = P.labels(q)
        if np.any(B.proj[sec] != labels):
            rep.violations.append(f"section over {probe.id} does not lie over the probe")
            continue
        nv = len(probe.vertices)
        # pullback elements (u, e) with e over q(u); φ(u, s(u)·a) = (u, a)
        coords = {}
        for u in range(nv):
            for a in range(nG):
                coords[(u, int(B.act[sec[u], a]))] = a
        over = sum(int(fiber[labels[u]]) for u in range(nv))
        if len(coords) != nv * nG or over != nv * nG:
            rep.violations.append(f"trivialization over {probe.id} is not a bijection")
            continue
        elems = sorted(coords)
        pos = {e: i for i, e in enumerate(elems)}
        gu, gv = [], []
        pu, pv = probe.graph.edge_index_arrays()
        for u1, u2 in zip(pu.tolist(), pv.tolist()):
            for a in range(nG):
                for b in range(nG):
                    e1, e2 = int(B.act[sec[u1], a]), int(B.act[sec[u2], b])
                    if e1 == e2 or e2 in nb[e1]:
                        gu.append(pos[(u1, e1)])
                        gv.append(pos[(u2, e2)])
        _, pc = component_labels(len(elems), gu, gv)
        _, uc = probe.graph.components()
        target = {}
        ok = True
        for (u, e), c in zip(elems, pc.tolist()):
            key = (int(uc[u]), coords[(u, e)])
            if target.setdefault(c, key) != key:
                ok = False
                break
        if ok and len(set(target.values())) != len(target):
            ok = False
        if not ok:
            rep.violations.append(f"trivialization over {probe.id} does not respect components")
    return rep


# isomorphisms of bundles --------------------------------------------------------------

def find_bundle_isomorphism(B1: BundleModel, B2: BundleModel) -> np.ndarray | None:
    """A G-equivariant bijection over the base preserving the edge relation, or None."""
    G = B1.G
    if len(B1) != len(B2) or len(B1.points) != len(B2.points):
        return None
    nb1, nb2 = B1.neighbor_sets(), B2.neighbor_sets()
    fib1 = [[] for _ in B1.points]
    fib2 = [[] for _ in B2.points]
    for x in range(len(B1)):
        fib1[int(B1.proj[x])].append(x)
    for x in range(len(B2)):
        fib2[int(B2.proj[x])].append(x)
    if any(len(a) != len(b) for a, b in zip(fib1, fib2)):
        return None
    F = np.full(len(B1), -1, dtype=IDX)
    used = np.zeros(len(B2), dtype=bool)
    # one representative per G-orbit; fibers need not be single orbits
    seen = np.zeros(len(B1), dtype=bool)
    reps = []
    for f in fib1:
        for x in f:
            if not seen[x]:
                reps.append(x)
                seen[B1.act[x]] = True

    def consistent(r):
        for a in range(G.order):
            x = int(B1.act[reps[r], a])
            for y in nb1[x]:
                if F[y] >= 0 and int(F[y]) not in nb2[int(F[x])]:
                    return False
        return True

    def place(r, target) -> list | None:
        """Send reps[r]·a to target·a; None if that is not a well-defined injection."""
        done = []
        for a in range(G.order):
            x, y = int(B1.act[reps[r], a]), int(B2.act[target, a])
            if F[x] >= 0:
                if F[x] != y:
                    break
                continue
            if used[y]:
                break
            F[x], used[y] = y, True
            done.append(x)
        else:
            return done
        undo(done)
        return None

    def undo(done):
        for x in done:
            used[F[x]] = False
            F[x] = -1

    def rec(r):
        if r == len(reps):
            return True
        for target in fib2[int(B1.proj[reps[r]])]:
            if used[target]:
                continue
            done = place(r, target)
            if done is None:
                continue
            if consistent(r) and rec(r + 1):
                return True
            undo(done)
        return False

    if not rec(0):
        return None
    n_edges1 = sum(len(s) for s in nb1)
    n_edges2 = sum(len(s) for s in nb2)
    if len(set(F.tolist())) != len(B1) or n_edges1 != n_edges2:
        return None
    return F


@dataclass
class BundleMap:
    source: BundleModel
    target: BundleModel
    table: np.ndarray


def cocycle_morphisms(g: PlotCocycle, g2: PlotCocycle, cap: int = COCYCLE_CAP) -> np.ndarray:
    """All gauge elements h with h·g = g2 (rows over (probe, component) slots)."""
    S = g.space
    H = S.gauge_elements(cap)
    moved = S.act(H, g.values.reshape(1, -1))
    return H[np.all(moved == g2.values.reshape(1, -1), axis=1)]


def morphism_to_bundle_map(P: PlotPresentation, G: FiniteGroup, g: PlotCocycle, g2: PlotCocycle,
                           h) -> BundleMap:
    """[p, u, k] -> [p, u, h_p(u) k], checked on every identification."""
    S = g.space
    h = np.asarray(h, dtype=IDX).reshape(1, -1)
    if h.shape[1] != S.n_gauge_slots or not np.array_equal(S.act(h, g.values.reshape(1, -1))[0],
                                                            g2.values):
        raise ConsistencyError("refusing h: it is not a cocycle morphism from g to g'")
    B1 = bundle_from_plot_cocycle(P, G, g)
    B2 = bundle_from_plot_cocycle(P, G, g2)
    table = np.full(len(B1), -1, dtype=IDX)
    for p in range(len(P.probes)):
        _, cs = S.comp[p]
        hp = h[0, S.gslots(p)][cs]  # per vertex
        src = B1.lifts[p]
        dst = B2.lifts[p][np.arange(len(cs))[:, None], G.mul[hp[:, None], np.arange(G.order)[None, :]]]
        prev = table[src]
        clash = (prev >= 0) & (prev != dst)
        if np.any(clash):
            raise ConsistencyError("bundle map is not well defined on identified points")
        table[src] = dst
    if np.any(table < 0) or len(set(table.tolist())) != len(B1):
        raise ConsistencyError("bundle map is not a bijection")
    if np.any(B2.proj[table] != B1.proj):
        raise ConsistencyError("bundle map does not cover the identity")
    if np.any(table[B1.act] != B2.act[table]):
        raise ConsistencyError("bundle map is not equivariant")
    return BundleMap(B1, B2, table)


# cover cocycles -------------------------------------------------------------------------

@dataclass
class CoverCocycle:
    graph: ProbeGraph
    patches: list  # vertex lists
    intersections: dict  # (i, j), i < j -> (n_components, component label per shared vertex)
    values: dict  # (i, j), i < j -> list of group elements per component


def _induced_components(graph: ProbeGraph, verts: list):
    pos = {v: i for i, v in enumerate(verts)}
    u, v = [], []
    for a, b in graph.edges:
        if a in pos and b in pos:
            u.append(pos[a])
            v.append(pos[b])
    return component_labels(len(verts), u, v)


def cover_cocycle(graph: ProbeGraph, patches, G: FiniteGroup, values: dict | None = None) -> CoverCocycle:
    """Cover of one probe by patches (vertex lists) with g_ij on components of U_i ∩ U_j.

    values maps "i,j" or (i, j) with i < j to {component index: element}; missing
    entries are the unit. Patch vertices keep the order of the probe.
    """
    order = {v: k for k, v in enumerate(graph.vertices)}
    patches = [sorted(set(p), key=order.__getitem__) for p in patches]
    for p in patches:
        bad = [v for v in p if v not in order]
        if bad:
            raise MalformedInputError(f"patch uses unknown vertices {bad}")
    if set().union(*map(set, patches)) != set(graph.vertices):
        raise ModelError("patches do not cover the probe")
    inter, vals = {}, {}
    values = values or {}
    norm = {}
    for key, per in values.items():
        i, j = (int(s) for s in key.split(",")) if isinstance(key, str) else key
        if i >= j:
            raise MalformedInputError("cover cocycle keys need i < j (g_ji is the inverse)")
        norm[(i, j)] = per
    for i in range(len(patches)):
        for j in range(i + 1, len(patches)):
            shared = [v for v in patches[i] if v in set(patches[j])]
            if not shared:
                continue
            nc, lab = _induced_components(graph, shared)
            inter[(i, j)] = (nc, dict(zip(shared, lab.tolist())))
            per = norm.pop((i, j), {})
            vv = [G.unit] * nc
            for c, x in per.items():
                if not 0 <= int(c) < nc:
                    raise MalformedInputError(f"U_{i} ∩ U_{j} has no component {c}")
                vv[int(c)] = G.index(x)
            vals[(i, j)] = vv
    if norm:
        raise MalformedInputError(f"labels for empty intersections {sorted(norm)}")
    return CoverCocycle(graph, patches, inter, vals)


def _gij(c: CoverCocycle, G: FiniteGroup, i: int, j: int, v) -> int:
    if i == j:
        return G.unit
    if i < j:
        _, lab = c.intersections[(i, j)]
        return c.values[(i, j)][lab[v]]
    return int(G.inv[_gij(c, G, j, i, v)])


def verify_cover_cocycle(c: CoverCocycle, G: FiniteGroup) -> Report:
    rep = Report()
    sets = [set(p) for p in c.patches]
    for i, j, k in product(range(len(sets)), repeat=3):
        for v in sets[i] & sets[j] & sets[k]:
            lhs = _gij(c, G, i, k, v)
            rhs = int(G.mul[_gij(c, G, j, k, v), _gij(c, G, i, j, v)])
            if lhs != rhs:
                rep.violations.append(f"g_{i}{k} != g_{j}{k} g_{i}{j} at {v}")
                return rep
    return rep


def bundle_from_cover_cocycle(c: CoverCocycle, G: FiniteGroup) -> BundleModel:
    """∐ U_i × G modulo (i, x, h) ~ (j, x, g_ij(x) h), over the probe's vertices."""
    rep = verify_cover_cocycle(c, G)
    if not rep.ok:
        raise ConsistencyError(f"refusing an invalid cover cocycle: {rep.violations[0]}")
    nG = G.order
    order = c.graph.index
    noff = np.concatenate([[0], np.cumsum([len(p) for p in c.patches])]).astype(IDX)
    pos = [{v: k for k, v in enumerate(p)} for p in c.patches]
    node = lambda i, v, h: (noff[i] + pos[i][v]) * nG + h  # noqa: E731
    node_point = np.repeat(np.array([order[v] for p in c.patches for v in p], dtype=IDX), nG)
    node_h = np.tile(np.arange(nG, dtype=IDX), int(noff[-1]))
    names = [f"[U{i},{v},{G.names[h]}]" for i, p in enumerate(c.patches) for v in p for h in range(nG)]
    ru, rv = [], []
    for (i, j) in c.intersections:
        for v in c.patches[i]:
            if v in pos[j]:
                for h in range(nG):
                    ru.append(node(i, v, h))
                    rv.append(node(j, v, int(G.mul[_gij(c, G, i, j, v), h])))
    eu, ev = [], []
    for i, p in enumerate(c.patches):
        for a, b in c.graph.edges:
            if a in pos[i] and b in pos[i]:
                for h in range(nG):
                    eu.append(node(i, a, h))
                    ev.append(node(i, b, h))
    all_nodes = np.arange(len(node_h), dtype=IDX)
    mult = lambda a: all_nodes - node_h + G.mul[node_h, a]  # noqa: E731
    return _quotient_bundle(G, list(c.graph.vertices), node_point, node_h, names,
                            np.array(ru, dtype=IDX), np.array(rv, dtype=IDX),
                            np.array(eu, dtype=IDX), np.array(ev, dtype=IDX), mult, {})


def cover_presentation(c: CoverCocycle, name: str = "cover") -> PlotPresentation:
    """Probes are the patches and the components of pairwise intersections."""
    from .site import Probe, ProbeMap

    g = c.graph
    probes, maps = [], []

    def sub(pid, verts):
        s = set(verts)
        edges = tuple((a, b) for a, b in sorted(g.edges) if a in s and b in s)
        return Probe(pid, ProbeGraph(tuple(verts), frozenset(edges)), {v: v for v in verts}, edges)

    for i, p in enumerate(c.patches):
        probes.append(sub(f"U{i}", p))
    for (i, j), (nc, lab) in sorted(c.intersections.items()):
        for comp in range(nc):
            verts = [v for v in c.patches[i] if lab.get(v) == comp]
            pid = f"U{i}{j}_{comp}"
            probes.append(sub(pid, verts))
            maps.append(ProbeMap(f"{pid}>U{i}", pid, f"U{i}", {v: v for v in verts}))
            maps.append(ProbeMap(f"{pid}>U{j}", pid, f"U{j}", {v: v for v in verts}))
    return PlotPresentation(list(g.vertices), probes, maps, name)


def plot_cocycle_from_cover(c: CoverCocycle, G: FiniteGroup, P: PlotPresentation) -> PlotCocycle:
    """g on c -> U_i is the unit and on c -> U_j is g_ij, for c ⊂ U_i ∩ U_j, i < j."""
    labels = {}
    for (i, j), (nc, _) in sorted(c.intersections.items()):
        for comp in range(nc):
            labels[f"U{i}{j}_{comp}>U{j}"] = {"0": G.names[c.values[(i, j)][comp]]}
    return cocycle_from_labels(P, G, labels)


# the cocycle groupoid and classification ------------------------------------------------

@dataclass
class CocycleGroupoid:
    space: CocycleSpace
    objects: np.ndarray  # valid cocycles, rows
    codes: np.ndarray
    orbit: np.ndarray  # orbit label per object, numbered by first (lexicographically least) member
    n_orbits: int

    def __len__(self):
        return len(self.objects)

    def index_of(self, V: np.ndarray) -> np.ndarray:
        codes = self.space.encode(np.atleast_2d(V))
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, len(self.codes) - 1)
        if np.any(self.codes[pos] != codes):
            raise ConsistencyError("gauge action left the set of cocycles")
        return pos

    def cocycle(self, i: int) -> PlotCocycle:
        return PlotCocycle(self.space, self.objects[i].copy())

    def representatives(self) -> list[int]:
        reps = [-1] * self.n_orbits
        for i in range(len(self.orbit) - 1, -1, -1):
            reps[self.orbit[i]] = i
        return reps

    def stabilizer(self, i: int, cap: int = COCYCLE_CAP) -> np.ndarray:
        S = self.space
        H = S.gauge_elements(cap)
        moved = S.act(H, self.objects[i].reshape(1, -1))
        return H[np.all(moved == self.objects[i].reshape(1, -1), axis=1)]

    def as_fin_groupoid(self, cap: int = GROUPOID_CAP) -> FinGroupoid:
        """Objects are cocycles, arrows (g, h): g -> h·g, composed by h'·h."""
        S = self.space
        nobj, ng = len(self.objects), S.gauge_order
        if nobj * ng * ng > cap:
            raise ResourceCapError("cocycle groupoid composable pairs", nobj * ng * ng, cap)
        H = S.gauge_elements(cap)
        hcode = {tuple(r): i for i, r in enumerate(H.tolist())}
        hm = np.array([[hcode[tuple(r)] for r in S.gauge_mul(H[a][None, :], H).tolist()]
                       for a in range(ng)], dtype=IDX)
        tgt = np.empty(nobj * ng, dtype=IDX)
        for o in range(nobj):
            tgt[o * ng:(o + 1) * ng] = self.index_of(S.act(H, self.objects[o].reshape(1, -1)))
        src = np.repeat(np.arange(nobj, dtype=IDX), ng)
        comps = {}
        for f in range(nobj * ng):
            o, a = divmod(f, ng)
            t = int(tgt[f])
            for b in range(ng):
                comps[(t * ng + b, f)] = o * ng + int(hm[b, a])
        unit = hcode[tuple([S.G.unit] * S.n_gauge_slots)]
        names = [f"{o}:{a}" for o in range(nobj) for a in range(ng)]
        return FinGroupoid([str(c) for c in self.codes.tolist()], names, src, tgt,
                           np.arange(nobj) * ng + unit, comps)

    def skeleton(self, cap: int = COCYCLE_CAP) -> FinGroupoid:
        """Full subgroupoid on orbit representatives: automorphism groups only."""
        S = self.space
        objs, names, src, tgt, ident, comps = [], [], [], [], [], {}
        base = 0
        for r, i in enumerate(self.representatives()):
            stab = self.stabilizer(i, cap)
            pos = {tuple(x): k for k, x in enumerate(stab.tolist())}
            objs.append(str(int(self.codes[i])))
            n = len(stab)
            for k in range(n):
                names.append(f"{r}:{k}")
                src.append(r)
                tgt.append(r)
            ident.append(base + pos[tuple([S.G.unit] * S.n_gauge_slots)])
            for a in range(n):
                prod = S.gauge_mul(stab[a][None, :], stab)
                for b in range(n):
                    comps[(base + a, base + b)] = base + pos[tuple(prod[b].tolist())]
            base += n
        return FinGroupoid(objs, names, src, tgt, ident, comps)


def cocycle_groupoid(P: PlotPresentation, G: FiniteGroup, cap: int = COCYCLE_CAP) -> CocycleGroupoid:
    S, V = enumerate_cocycles(P, G, cap)
    codes = S.encode(V)
    n = len(V)
    us, vs = [], []
    # single-slot gauge moves generate the gauge group
    for slot in range(S.n_gauge_slots):
        for a in range(G.order):
            if a == G.unit:
                continue
            H = np.full((1, S.n_gauge_slots), G.unit, dtype=IDX)
            H[0, slot] = a
            moved = S.encode(S.act(H, V))
            pos = np.searchsorted(codes, moved)
            if np.any(pos >= n) or np.any(codes[np.minimum(pos, n - 1)] != moved):
                raise ConsistencyError("gauge action left the set of cocycles")
            us.append(np.arange(n))
            vs.append(pos)
    if us:
        m = coo_matrix((np.ones(sum(len(u) for u in us), dtype=np.int8),
                        (np.concatenate(us), np.concatenate(vs))), shape=(n, n))
        _, raw = connected_components(m, directed=False)
    else:
        raw = np.arange(n)
    # renumber orbits by their least member
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    relabel = np.empty(len(order), dtype=IDX)
    relabel[order] = np.arange(len(order))
    orbit = relabel[raw]
    return CocycleGroupoid(S, V, codes, orbit, len(order))


def groupoid_for_nerve(C: CocycleGroupoid, n_probe: int = 4, cap: int = 2_000_000
                       ) -> tuple[str, FinGroupoid]:
    """The whole cocycle groupoid when its nerve up to n_probe fits under cap,
    otherwise the equivalent skeleton on orbit representatives."""
    nobj, ng = len(C), C.space.gauge_order
    if nobj * ng ** n_probe <= cap and nobj * ng * ng <= GROUPOID_CAP:
        return "full", C.as_fin_groupoid()
    return "skeleton", C.skeleton()


def abelian_structure(elements: np.ndarray, G: FiniteGroup) -> FgAbGroup | None:
    """Invariant factors of an abelian subgroup of G^m given by its element rows."""
    E = np.asarray(elements, dtype=IDX)
    n = len(E)
    if n == 0:
        return None
    if n * n <= 1_000_000:
        for a in range(n):
            if np.any(G.mul[E[a][None, :], E] != G.mul[E, E[a][None, :]]):
                return None
    orders_G = G.element_orders()
    ords = np.ones(n, dtype=np.int64)
    for col in range(E.shape[1]):
        ords = np.lcm(ords, orders_G[E[:, col]])
    torsion = []
    rest = n
    p = 2
    while rest > 1:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            # number of cyclic factors of order >= p^j is log_p |Ω_{p^j}| - log_p |Ω_{p^{j-1}}|
            logs = [0]
            for j in range(1, e + 1):
                cnt = int(np.count_nonzero((p ** j) % ords == 0))
                logs.append(round(np.log(cnt) / np.log(p)))
            at_least = [logs[j] - logs[j - 1] for j in range(1, e + 1)]
            for j in range(e):
                exactly = at_least[j] - (at_least[j + 1] if j + 1 < e else 0)
                torsion += [p ** (j + 1)] * exactly
        p += 1
    return FgAbGroup(0, tuple(torsion)) if torsion else FgAbGroup.zero()


@dataclass
class BundleClass:
    representative: PlotCocycle
    size: int
    gauge_order: int
    gauge_group: FgAbGroup | None  # None when non-abelian
    bundle: BundleModel
    principal: bool | None = None  # None when not checked
    note: str = ""

    def describe(self) -> dict:
        out = {"representative": self.representative.to_json()["labels"], "size": self.size,
               "gauge_order": self.gauge_order,
               "gauge_group": str(self.gauge_group) if self.gauge_group is not None else "non-abelian",
               "components": self.bundle.n_components, "principal": self.principal}
        if self.note:
            out["note"] = self.note
        return out


def classify_bundles(P: PlotPresentation, G: FiniteGroup, cap: int = COCYCLE_CAP,
                     check_bundles: bool = True) -> list[BundleClass]:
    """Isomorphism classes of G-bundles glued from plot cocycles.

    Classes are orbits of the gauge action; gauge groups are stabilizers of the
    lexicographically least member. With check_bundles the bundles of the
    representatives are built, verified principal, and shown pairwise
    non-isomorphic by a search on the bundle side. On presentations whose probe
    maps leave some fiber of the nebula unglued, or fix a vertex while carrying
    a nontrivial label, the glued space need not be principal; that is recorded
    on the class with its witness, and such classes sit out the pairwise test.
    """
    C = cocycle_groupoid(P, G, cap)
    sizes = np.bincount(C.orbit, minlength=C.n_orbits)
    out = []
    for r, i in enumerate(C.representatives()):
        stab = C.stabilizer(i, cap)
        if len(stab) * int(sizes[r]) != C.space.gauge_order:
            raise ConsistencyError("orbit-stabilizer count fails")
        g = C.cocycle(i)
        B = bundle_from_plot_cocycle(P, G, g)
        out.append(BundleClass(g, int(sizes[r]), len(stab), abelian_structure(stab, G), B))
    if check_bundles:
        loose = unglued_points(P)
        for c in out:
            rep = verify_principal(P, c.bundle)
            c.principal = rep.ok
            if not rep.ok:
                why = (f"probe maps leave the fibers over {', '.join(loose)} unglued" if loose
                       else "a probe map fixing a vertex carries a nontrivial label")
                c.note = f"not principal over X ({why}): {rep.violations[0]}"
        # classes are told apart by their bundles only where the bundles are principal
        good = [c for c in out if c.principal]
        for a in range(len(good)):
            for b in range(a + 1, len(good)):
                if find_bundle_isomorphism(good[a].bundle, good[b].bundle) is not None:
                    raise ConsistencyError("two cocycle classes give isomorphic bundles")
        # a second member of each class glues to an isomorphic bundle
        for r, c in enumerate(out):
            members = np.nonzero(C.orbit == r)[0]
            other = C.cocycle(int(members[-1]))
            if find_bundle_isomorphism(c.bundle, bundle_from_plot_cocycle(P, G, other)) is None:
                raise ConsistencyError("cocycles in one class give non-isomorphic bundles")
    return out


def brute_force_class_count(P: PlotPresentation, G: FiniteGroup, cap: int = BRUTE_FORCE_CAP
                            ) -> tuple[int, list[int]]:
    """Independent oracle: label every non-identity map on every source component,
    keep the labelings obeying the composition law, and count orbits under all
    single-slot gauge moves by breadth-first search. Returns (orbit count,
    stabilizer orders from orbit-stabilizer), orbits ordered by least labeling."""
    mors = P.morphisms
    comp = [p.graph.components() for p in P.probes]
    moves = [i for i, m in enumerate(mors) if not (m.src == m.tgt and list(m.vmap) == list(range(len(m.vmap))))]
    slots = [(m, c) for m in moves for c in range(comp[mors[m].src][0])]
    where = {s: k for k, s in enumerate(slots)}
    if G.order ** len(slots) > cap:
        raise ResourceCapError("brute-force labelings", G.order ** len(slots), cap)

    def comp_of(p, v):
        return int(comp[p][1][v])

    def val(lab, m, c):
        return lab[where[(m, c)]] if (m, c) in where else G.unit

    def valid(lab):
        for (a, b), h in P.composites.items():
            f1 = mors[b]
            for v in range(len(f1.vmap)):
                c = comp_of(f1.src, v)
                lhs = val(lab, h, c)
                rhs = G.mul[val(lab, a, comp_of(f1.tgt, f1.vmap[v])), val(lab, b, c)]
                if lhs != rhs:
                    return False
        return True

    labelings = [lab for lab in product(range(G.order), repeat=len(slots)) if valid(lab)]
    gslots = [(p, c) for p in range(len(P.probes)) for c in range(comp[p][0])]
    gauge = len(gslots)

    def move(lab, p, c, a):
        out = list(lab)
        for k, (m, cc) in enumerate(slots):
            f = mors[m]
            v = next(i for i in range(len(f.vmap)) if comp_of(f.src, i) == cc)
            left = a if (f.tgt == p and comp_of(f.tgt, f.vmap[v]) == c) else G.unit
            right = G.inv[a] if (f.src == p and cc == c) else G.unit
            out[k] = int(G.mul[G.mul[left, lab[k]], right])
        return tuple(out)

    seen = {}
    orbits = []
    for lab in labelings:
        if lab in seen:
            continue
        idx = len(orbits)
        seen[lab] = idx
        queue = [lab]
        for x in queue:
            for p, c in gslots:
                for a in range(G.order):
                    y = move(x, p, c, a)
                    if y not in seen:
                        seen[y] = idx
                        queue.append(y)
        orbits.append(len(queue))
    total = G.order ** gauge
    return len(orbits), [total // s for s in orbits]

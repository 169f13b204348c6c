"""Finite reflexive graphs standing in for cartesian probes.

A probe morphism is a vertex map sending every edge to an edge or collapsing
it to a single vertex, the discrete analogue of continuity. Connected
components play the role of path components, so "locally constant" means
constant on components.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def component_labels(n: int, edges_u, edges_v) -> tuple[int, np.ndarray]:
    """Connected components, numbered in order of first vertex appearance."""
    if n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    u = np.asarray(edges_u, dtype=np.int64)
    v = np.asarray(edges_v, dtype=np.int64)
    adj = coo_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(n, n))
    _, raw = connected_components(adj, directed=False)
    # renumber so component ids follow the first vertex carrying them
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    relabel = np.empty(len(order), dtype=np.int64)
    relabel[order] = np.arange(len(order))
    return len(order), relabel[raw]


@dataclass(frozen=True)
class ProbeGraph:
    vertices: tuple
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex labels")
        object.__setattr__(self, "vertices", verts)
        pos = {v: i for i, v in enumerate(verts)}
        clean = set()
        for a, b in self.edges:
            if a not in pos or b not in pos:
                raise ValueError(f"edge ({a},{b}) uses an unknown vertex")
            if a == b:
                continue  # reflexive loops are implicit
            clean.add((a, b) if pos[a] < pos[b] else (b, a))
        object.__setattr__(self, "edges", frozenset(clean))

    @property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def __len__(self):
        return len(self.vertices)

    def edge_index_arrays(self):
        pos = self.index
        pairs = sorted((pos[a], pos[b]) for a, b in self.edges)
        u = np.array([p[0] for p in pairs], dtype=np.int64)
        v = np.array([p[1] for p in pairs], dtype=np.int64)
        return u, v

    def components(self) -> tuple[int, np.ndarray]:
        u, v = self.edge_index_arrays()
        return component_labels(len(self.vertices), u, v)

    def neighbors(self) -> list[set]:
        out = [set() for _ in self.vertices]
        u, v = self.edge_index_arrays()
        for a, b in zip(u.tolist(), v.tolist()):
            out[a].add(b)
            out[b].add(a)
        return out

    def is_graph_map(self, target: "ProbeGraph", vmap: dict) -> bool:
        """Edges go to edges or collapse to a vertex."""
        if set(vmap) != set(self.vertices):
            return False
        tv = set(target.vertices)
        if any(w not in tv for w in vmap.values()):
            return False
        tpos = target.index
        for a, b in self.edges:
            x, y = vmap[a], vmap[b]
            if x != y and ((x, y) if tpos[x] < tpos[y] else (y, x)) not in target.edges:
                return False
        return True

    @staticmethod
    def path(labels) -> "ProbeGraph":
        labels = list(labels)
        return ProbeGraph(tuple(labels), frozenset(zip(labels, labels[1:])))

    @staticmethod
    def point(label) -> "ProbeGraph":
        return ProbeGraph((label,), frozenset())

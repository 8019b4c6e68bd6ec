"""Abstract simplicial complexes and the maps between them.

Faces are sorted tuples of vertex indices; ``labels[i]`` names vertex ``i``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from . import budget
from .errors import NotExtendable, NoUpperBound, NonUniqueJoin, OrderCxError
from .poset import Poset, hashable, jsonable, reduced


class SimplicialComplex:
    """A complex given by its facets (inclusion-maximal faces)."""

    def __init__(self, labels, facets):
        self.labels = [hashable(x) for x in labels]
        self.index = {x: i for i, x in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise OrderCxError("duplicate vertex labels")
        cleaned = {tuple(sorted(set(int(v) for v in f))) for f in facets}
        cleaned.discard(())
        for f in cleaned:
            if f[0] < 0 or f[-1] >= len(self.labels):
                raise OrderCxError(f"facet {f} uses an undeclared vertex")
        by_size = sorted(cleaned, key=lambda f: (-len(f), f))
        kept = []
        for f in by_size:
            fs = set(f)
            if not any(fs <= set(g) for g in kept if len(g) > len(f)):
                kept.append(f)
        self.facets = sorted(kept, key=lambda f: (len(f), f))

    def __repr__(self):
        return f"SimplicialComplex({len(self.labels)} vertices, {len(self.facets)} facets, dim {self.dim})"

    @property
    def n_vertices(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    @cached_property
    def faces(self) -> list:
        """Every nonempty face, ordered by (size, vertices)."""
        estimate = sum(2 ** len(f) - 1 for f in self.facets)
        budget.check("faces", min(estimate, 10**12), "face closure")
        out = set()
        for f in self.facets:
            for k in range(1, len(f) + 1):
                out.update(itertools.combinations(f, k))
        return sorted(out, key=lambda f: (len(f), f))

    @cached_property
    def face_set(self) -> frozenset:
        return frozenset(self.faces)

    def faces_of_dim(self, k: int) -> list:
        return [f for f in self.faces if len(f) == k + 1]

    @cached_property
    def _facets_at(self):
        out = [set() for _ in self.labels]
        for t, f in enumerate(self.facets):
            for v in f:
                out[v].add(t)
        return out

    def is_face(self, vertices) -> bool:
        """Membership test without materializing the closure."""
        vs = set(vertices)
        if not vs:
            return True
        common = set.intersection(*(self._facets_at[v] for v in vs))
        return bool(common)

    @property
    def f_vector(self) -> list:
        counts = [0] * (self.dim + 1)
        for f in self.faces:
            counts[len(f) - 1] += 1
        return counts

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector))

    @property
    def edges(self) -> list:
        return self.faces_of_dim(1)

    def to_json(self) -> dict:
        return {"vertices": [jsonable(x) for x in self.labels],
                "facets": [list(f) for f in self.facets]}

    @classmethod
    def from_json(cls, obj: dict) -> "SimplicialComplex":
        return cls(obj["vertices"], obj["facets"])


def complex_from_facets(labels, facets) -> SimplicialComplex:
    """Facets are given as collections of vertex labels.

    ``labels=None`` takes the sorted union of the facet vertices.
    """
    facets = [list(f) for f in facets]
    if labels is None:
        labels = sorted({hashable(v) for f in facets for v in f}, key=repr)
    labels = [hashable(x) for x in labels]
    index = {x: i for i, x in enumerate(labels)}
    try:
        idx = [[index[hashable(v)] for v in f] for f in facets]
    except KeyError as exc:
        raise OrderCxError(f"facet vertex {exc.args[0]!r} is not a declared label") from None
    return SimplicialComplex(labels, idx)


def join_complexes(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """K * L on disjoint copies; vertex labels become (0, a) and (1, b)."""
    labels = [(0, x) for x in K.labels] + [(1, x) for x in L.labels]
    off = K.n_vertices
    facets = [f + tuple(off + v for v in g) for f in K.facets for g in L.facets]
    return SimplicialComplex(labels, facets)


def d3_join_power(d: int) -> SimplicialComplex:
    """D_3^{*(d+1)}: vertices (i, j) with i in 1..d+1, j in 1..3."""
    if d < 0:
        raise ValueError("d must be >= 0")
    labels = [(i, j) for i in range(1, d + 2) for j in range(1, 4)]
    facets = [tuple(3 * i + (j - 1) for i, j in enumerate(js))
              for js in itertools.product((1, 2, 3), repeat=d + 1)]
    return SimplicialComplex(labels, facets)


def face_poset(K: SimplicialComplex) -> Poset:
    """F(K): nonempty faces under inclusion; labels are tuples of vertex labels."""
    faces = K.faces
    pos = {f: i for i, f in enumerate(faces)}
    covers = []
    for f in faces:
        if len(f) > 1:
            for k in range(len(f)):
                covers.append((pos[f[:k] + f[k + 1:]], pos[f]))
    labels = [tuple(K.labels[v] for v in f) for f in faces]
    return Poset.from_covers(labels, covers)


def maximal_chains(P: Poset) -> list:
    """Saturated chains from minimal to maximal elements, depth first."""
    cap = budget.limit("chains")
    up = P.upper_covers
    out = []
    stack = [[m] for m in reversed(P.minimal)]
    while stack:
        path = stack.pop()
        nxt = up[path[-1]]
        if not nxt:
            out.append(tuple(path))
            if len(out) > cap:
                budget.check("chains", len(out), "maximal chains")
            continue
        for b in sorted(nxt, reverse=True):
            stack.append(path + [b])
    return out


def order_complex(P: Poset) -> SimplicialComplex:
    """Delta(P): the chains of P; vertex i is element i of P."""
    return SimplicialComplex(P.labels, maximal_chains(P))


def reduced_order_complex(P: Poset) -> SimplicialComplex:
    return order_complex(reduced(P))


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    return order_complex(face_poset(K))


@dataclass
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: list  # source vertex index -> target vertex index

    def image(self, face) -> tuple:
        return tuple(sorted({self.vertex_map[v] for v in face}))

    def verify(self) -> bool:
        """Every facet image is a face of the target."""
        if len(self.vertex_map) != self.source.n_vertices:
            return False
        return all(self.target.is_face(self.image(f)) for f in self.source.facets)


def _host_poset(host):
    return host if isinstance(host, Poset) else host.poset


def induced_simplicial_map(g, K: SimplicialComplex, host) -> SimplicialMap:
    """Extend a vertex map g: V(K) -> P by joins and induce sd K -> Delta(P-bar).

    ``g`` maps vertex labels of K to host elements.  ``host`` is a ``Poset``
    (elements are indices) or a ``spaces.IsotropicPoset`` (elements are
    subspaces).
    """
    P = _host_poset(host)
    explicit = isinstance(host, Poset)
    to_index = (lambda x: int(x)) if explicit else host.index_of
    gi = {}
    for v in K.labels:
        if v not in g:
            raise NotExtendable(f"vertex {v!r} has no image", face=(v,))
        gi[v] = to_index(g[v])
    sd = barycentric_subdivision(K)
    red = reduced(P)
    local = {p: k for k, p in enumerate(red.parent_indices)}
    vmap = []
    for face_label in sd.labels:
        try:
            j = P.join([gi[v] for v in face_label])
        except (NoUpperBound, NonUniqueJoin) as exc:
            raise NotExtendable(f"join of face {face_label!r} does not exist: {exc}",
                                face=face_label) from None
        if j not in local:
            raise NotExtendable(f"face {face_label!r} joins to the bottom or top element",
                                face=face_label)
        vmap.append(local[j])
    target = order_complex(red)
    out = SimplicialMap(sd, target, vmap)
    if not out.verify():
        raise OrderCxError("induced vertex map does not send chains to chains")
    return out


# -- graphs ---------------------------------------------------------------------

SUBDIVISION_CAP = 12


def _adjacency(K: SimplicialComplex):
    adj = [set() for _ in range(K.n_vertices)]
    for f in K.facets:
        if len(f) == 2:
            a, b = f
            adj[a].add(b)
            adj[b].add(a)
    return adj


def _bfs(adj, s):
    dist = {s: 0}
    parent = {s: None}
    queue = deque([s])
    best = None
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                parent[w] = u
                queue.append(w)
            elif parent[u] != w:
                cyc = dist[u] + dist[w] + 1
                if best is None or cyc < best:
                    best = cyc
    return dist, best


def _reduce_graph(adj):
    """Delete vertices of degree <= 1 and smooth degree-2 vertices.

    Neither step changes planarity, and parallel edges created by smoothing
    are collapsed since they cannot matter for a Kuratowski subdivision.
    """
    adj = {v: set(ns) for v, ns in enumerate(adj)}
    changed = True
    while changed:
        changed = False
        for v in list(adj):
            if v not in adj:
                continue
            deg = len(adj[v])
            if deg <= 1:
                for w in adj[v]:
                    adj[w].discard(v)
                del adj[v]
                changed = True
            elif deg == 2:
                a, b = adj[v]
                adj[a].discard(v)
                adj[b].discard(v)
                del adj[v]
                adj[a].add(b)
                adj[b].add(a)
                changed = True
    return adj


def _disjoint_paths(adj, pairs, branch):
    """Backtracking search for internally disjoint paths joining each pair."""
    used = set(branch)

    def route(k):
        if k == len(pairs):
            return True
        s, t = pairs[k]
        if t in adj[s]:
            return route(k + 1)
        return _extend(k, s, t, [s])

    def _extend(k, u, t, path):
        for w in sorted(adj[u]):
            if w == t and len(path) > 1:
                if route(k + 1):
                    return True
            elif w not in used:
                used.add(w)
                if _extend(k, w, t, path + [w]):
                    return True
                used.discard(w)
        return False

    return route(0)


def find_kuratowski_subdivision(K: SimplicialComplex):
    """Brute-force search for a K_{3,3} or K_5 subdivision in a small graph.

    Returns ``"K33"``, ``"K5"``, ``None`` (none exists) or ``"skipped"`` when
    the reduced graph exceeds the size cap.
    """
    adj = _reduce_graph(_adjacency(K))
    if len(adj) > SUBDIVISION_CAP:
        return "skipped"
    verts = sorted(adj)
    deg3 = [v for v in verts if len(adj[v]) >= 3]
    for A in itertools.combinations(deg3, 3):
        rest = [v for v in deg3 if v not in A and v > A[0]]
        for B in itertools.combinations(rest, 3):
            pairs = sorted([(a, b) for a in A for b in B], key=lambda p: (p[1] not in adj[p[0]]))
            if _disjoint_paths(adj, pairs, A + B):
                return "K33"
    deg4 = [v for v in verts if len(adj[v]) >= 4]
    for S in itertools.combinations(deg4, 5):
        pairs = sorted(itertools.combinations(S, 2), key=lambda p: (p[1] not in adj[p[0]]))
        if _disjoint_paths(adj, pairs, S):
            return "K5"
    return None


def graph_stats(K: SimplicialComplex) -> dict:
    if K.dim > 1:
        raise OrderCxError(f"graph_stats needs a complex of dimension <= 1, got {K.dim}")
    adj = _adjacency(K)
    n = len(adj)
    color = [-1] * n
    bipartite = True
    for s in range(n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    bipartite = False
    girth = None
    ecc = []
    connected = True
    for s in range(n):
        dist, cyc = _bfs(adj, s)
        if cyc is not None and (girth is None or cyc < girth):
            girth = cyc
        if len(dist) < n:
            connected = False
        ecc.append(max(dist.values()))
    diameter = max(ecc) if connected and n else None
    min_degree = min((len(a) for a in adj), default=0)
    euler = girth is not None and girth >= 6 and min_degree >= 3
    subdivision = find_kuratowski_subdivision(K)
    return {
        "vertices": n,
        "edges": sum(len(a) for a in adj) // 2,
        "bipartite": bipartite,
        "girth": girth,
        "diameter": diameter,
        "min_degree": min_degree,
        "euler_rule": euler,
        "subdivision": subdivision,
        "euler_nonplanar_flag": euler or subdivision in ("K33", "K5"),
    }

"""Finite posets on a dense boolean order matrix, plus lattice analysis.

Elements are the integers ``0..n-1``; ``labels[i]`` is the user-facing name of
element ``i``.  ``order[i, j]`` is True iff ``i <= j``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import budget
from .errors import (
    FactorizationCheckFailed,
    NonUniqueJoin,
    NonUniqueMeet,
    NoLowerBound,
    NotGraded,
    NotModularGeometric,
    NoUpperBound,
    PosetError,
)


def hashable(label):
    """Recursively turn JSON lists into tuples so labels can key dicts."""
    if isinstance(label, list):
        return tuple(hashable(x) for x in label)
    return label


def jsonable(label):
    if isinstance(label, (tuple, list)):
        return [jsonable(x) for x in label]
    if isinstance(label, frozenset):
        return sorted(jsonable(x) for x in label)
    if isinstance(label, (np.integer,)):
        return int(label)
    return label


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


class Poset:
    """Immutable finite poset.

    Build through :meth:`from_covers`, :meth:`from_leq` or :meth:`from_sets`
    rather than the raw constructor, which trusts its input.
    """

    def __init__(self, labels, order: np.ndarray, covers=None):
        self.labels = [hashable(x) for x in labels]
        self.n = len(self.labels)
        self.index = {}
        for i, x in enumerate(self.labels):
            if x in self.index:
                raise PosetError(f"duplicate label {x!r}")
            self.index[x] = i
        order = np.asarray(order, dtype=bool)
        if order.shape != (self.n, self.n):
            raise PosetError("order matrix shape does not match labels")
        order.setflags(write=False)
        self.order = order
        if covers is not None:
            self._covers = sorted({(int(a), int(b)) for a, b in covers})

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_covers(cls, labels, cover_pairs) -> "Poset":
        labels = list(labels)
        n = len(labels)
        budget.check("elements", n, "poset")
        succ = [[] for _ in range(n)]
        indeg = [0] * n
        for a, b in cover_pairs:
            a, b = int(a), int(b)
            if not (0 <= a < n and 0 <= b < n):
                raise PosetError(f"cover pair ({a}, {b}) out of range")
            if a == b:
                raise PosetError(f"cycle detected: {a} covers itself")
            succ[a].append(b)
            indeg[b] += 1
        topo = [i for i in range(n) if indeg[i] == 0]
        for a in topo:
            for b in succ[a]:
                indeg[b] -= 1
                if indeg[b] == 0:
                    topo.append(b)
        if len(topo) != n:
            stuck = next(i for i in range(n) if indeg[i] > 0)
            raise PosetError(f"cycle detected through element {stuck}")
        order = np.zeros((n, n), dtype=bool)
        for a in reversed(topo):
            row = order[a]
            row[a] = True
            for b in succ[a]:
                row |= order[b]
        # keep only genuine covers
        lt = order.copy()
        np.fill_diagonal(lt, False)
        covers = []
        for a in range(n):
            for b in set(succ[a]):
                if not (lt[a] & lt[:, b]).any():
                    covers.append((a, b))
        return cls(labels, order, covers)

    @classmethod
    def from_leq(cls, labels, leq, check: bool = True) -> "Poset":
        order = np.array(leq, dtype=bool)
        if check:
            if not order.diagonal().all():
                raise PosetError("order relation is not reflexive")
            both = order & order.T
            np.fill_diagonal(both, False)
            if both.any():
                a, b = np.argwhere(both)[0]
                raise PosetError(f"antisymmetry fails for {a}, {b}")
            o = order.astype(np.float32)
            closure = (o @ o) > 0
            if (closure & ~order).any():
                a, b = np.argwhere(closure & ~order)[0]
                raise PosetError(f"transitivity fails for {a} <= {b}")
        return cls(labels, order)

    @classmethod
    def from_sets(cls, sets, labels=None) -> "Poset":
        """Family of finite sets ordered by inclusion."""
        sets = [frozenset(s) for s in sets]
        ground = sorted(set().union(*sets), key=repr) if sets else []
        pos = {x: i for i, x in enumerate(ground)}
        inc = np.zeros((len(sets), len(ground)), dtype=np.float32)
        for i, s in enumerate(sets):
            for x in s:
                inc[i, pos[x]] = 1
        outside = (inc @ (1 - inc).T) == 0  # |A \ B| == 0
        if labels is None:
            labels = [tuple(sorted(s, key=repr)) for s in sets]
        return cls.from_leq(labels, outside, check=True)

    # -- basic structure ---------------------------------------------------

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"Poset(n={self.n})"

    def le(self, a, b) -> bool:
        return bool(self.order[a, b])

    def lt(self, a, b) -> bool:
        return a != b and bool(self.order[a, b])

    def label(self, a):
        return self.labels[a]

    @cached_property
    def covers(self) -> list:
        if not hasattr(self, "_covers"):
            lt = self.order.copy()
            np.fill_diagonal(lt, False)
            f = lt.astype(np.float32)
            between = (f @ f) > 0
            self._covers = [tuple(map(int, x)) for x in np.argwhere(lt & ~between)]
        return self._covers

    @cached_property
    def cover_matrix(self):
        from scipy import sparse  # deferred: only thickness checks need it

        rows = [a for a, _ in self.covers]
        cols = [b for _, b in self.covers]
        data = np.ones(len(rows), dtype=np.int64)
        return sparse.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    @cached_property
    def upper_covers(self) -> list:
        out = [[] for _ in range(self.n)]
        for a, b in self.covers:
            out[a].append(b)
        return out

    @cached_property
    def lower_covers(self) -> list:
        out = [[] for _ in range(self.n)]
        for a, b in self.covers:
            out[b].append(a)
        return out

    @cached_property
    def upcount(self) -> np.ndarray:
        return self.order.sum(axis=1)

    @cached_property
    def downcount(self) -> np.ndarray:
        return self.order.sum(axis=0)

    @cached_property
    def bottom(self):
        hits = np.flatnonzero(self.order.all(axis=1))
        return int(hits[0]) if hits.size else None

    @cached_property
    def top(self):
        hits = np.flatnonzero(self.order.all(axis=0))
        return int(hits[0]) if hits.size else None

    @cached_property
    def minimal(self) -> list:
        return [int(i) for i in np.flatnonzero(self.downcount == 1)]

    @cached_property
    def maximal(self) -> list:
        return [int(i) for i in np.flatnonzero(self.upcount == 1)]

    @cached_property
    def atoms(self) -> list:
        """Elements covering the bottom; the minimal elements when there is none."""
        if self.bottom is None:
            return self.minimal
        return sorted(self.upper_covers[self.bottom])

    def is_atom(self, a) -> bool:
        return a in self._atom_set

    @cached_property
    def _atom_set(self):
        return frozenset(self.atoms)

    @cached_property
    def _height(self) -> np.ndarray:
        """Length of the longest chain from a minimal element up to each element."""
        height = np.zeros(self.n, dtype=np.int64)
        for a in np.argsort(self.downcount, kind="stable"):
            for b in self.upper_covers[a]:
                if height[b] < height[a] + 1:
                    height[b] = height[a] + 1
        return height

    @cached_property
    def grading(self):
        """(rank array or None, witness) -- witness explains a failure."""
        h = self._height
        for a, b in self.covers:
            if h[b] != h[a] + 1:
                return None, {"cover": [a, b], "reason": "maximal chains of different length"}
        tops = {int(h[m]) for m in self.maximal}
        if len(tops) > 1:
            return None, {"maximal": self.maximal, "reason": "maximal elements of different rank"}
        return h, None

    @property
    def rank_function(self):
        return self.grading[0]

    @property
    def is_graded(self) -> bool:
        return self.grading[0] is not None

    @property
    def rank(self):
        r = self.rank_function
        if r is None or self.n == 0:
            return None
        return int(r.max())

    def rk(self, a) -> int:
        r = self.rank_function
        if r is None:
            raise NotGraded("poset is not graded")
        return int(r[a])

    def elements_of_rank(self, k: int) -> list:
        r = self.rank_function
        if r is None:
            raise NotGraded("poset is not graded")
        return [int(i) for i in np.flatnonzero(r == k)]

    # -- joins and meets -----------------------------------------------------

    def join(self, elems):
        elems = list(elems)
        if not elems:
            if self.bottom is None:
                raise NoUpperBound("empty join in a poset without bottom")
            return self.bottom
        if len(elems) == 1:
            return int(elems[0])
        ub = np.logical_and.reduce(self.order[elems], axis=0)
        cand = np.flatnonzero(ub)
        if cand.size == 0:
            raise NoUpperBound(f"no upper bound for {elems}")
        least = cand[self.upcount[cand] == cand.size]
        if least.size != 1:
            raise NonUniqueJoin(f"no least upper bound for {elems}")
        return int(least[0])

    def meet(self, elems):
        elems = list(elems)
        if not elems:
            if self.top is None:
                raise NoLowerBound("empty meet in a poset without top")
            return self.top
        if len(elems) == 1:
            return int(elems[0])
        lb = np.logical_and.reduce(self.order[:, elems], axis=1)
        cand = np.flatnonzero(lb)
        if cand.size == 0:
            raise NoLowerBound(f"no lower bound for {elems}")
        greatest = cand[self.downcount[cand] == cand.size]
        if greatest.size != 1:
            raise NonUniqueMeet(f"no greatest lower bound for {elems}")
        return int(greatest[0])

    def atoms_below(self, x) -> list:
        return [a for a in self.atoms if self.order[a, x]]

    @cached_property
    def bound_tables(self):
        """Pairwise join / meet tables; -1 marks a pair without join (meet)."""
        n = self.n
        budget.check("elements", n, "join table")
        join = np.full((n, n), -1, dtype=np.int64)
        meet = np.full((n, n), -1, dtype=np.int64)
        up, down = self.order, self.order.T
        for a in range(n):
            for table, rel, count in ((join, up, self.upcount), (meet, down, self.downcount)):
                ub = rel[a][None, :] & rel
                sizes = ub.sum(axis=1)
                cand = ub & (count[None, :] == sizes[:, None])
                ok = cand.sum(axis=1) == 1
                table[a, ok] = np.argmax(cand[ok], axis=1)
        return join, meet

    # -- derived posets ------------------------------------------------------

    def subposet(self, indices, convex: bool = False) -> "Poset":
        """Induced subposet; for convex subsets covers are inherited."""
        idx = [int(i) for i in indices]
        pos = {x: k for k, x in enumerate(idx)}
        order = self.order[np.ix_(idx, idx)]
        covers = None
        if convex:
            covers = [(pos[a], pos[b]) for a, b in self.covers if a in pos and b in pos]
        sub = Poset([self.labels[i] for i in idx], order, covers)
        sub.parent_indices = idx
        return sub

    def to_json(self) -> dict:
        return {"labels": [jsonable(x) for x in self.labels],
                "covers": [[a, b] for a, b in self.covers]}

    @classmethod
    def from_json(cls, obj: dict) -> "Poset":
        if "labels" not in obj or "covers" not in obj:
            raise PosetError("poset JSON needs 'labels' and 'covers'")
        return cls.from_covers(obj["labels"], obj["covers"])

    def digest(self) -> str:
        return hashlib.sha256(canonical_json(self.to_json()).encode()).hexdigest()


# -- small constructors -------------------------------------------------------


def chain(n: int) -> Poset:
    return Poset.from_covers(list(range(n)), [(i, i + 1) for i in range(n - 1)])


def antichain(n: int) -> Poset:
    return Poset.from_covers(list(range(n)), [])


def diamond() -> Poset:
    return Poset.from_covers(["0", "a", "b", "1"], [(0, 1), (0, 2), (1, 3), (2, 3)])


def boolean_lattice(n: int) -> Poset:
    subsets = [s for k in range(n + 1) for s in itertools.combinations(range(1, n + 1), k)]
    pos = {s: i for i, s in enumerate(subsets)}
    covers = []
    for s in subsets:
        for x in range(1, n + 1):
            if x not in s:
                covers.append((pos[s], pos[tuple(sorted(s + (x,)))]))
    return Poset.from_covers(subsets, covers)


def lattice_of_flats(points, lines) -> Poset:
    """Rank-3 lattice: empty set, points, the given lines, the whole ground set."""
    points = list(points)
    sets = [frozenset()] + [frozenset([p]) for p in points]
    sets += [frozenset(line) for line in lines] + [frozenset(points)]
    labels = ["0"] + [f"p{p}" for p in points]
    labels += ["L" + "".join(str(p) for p in sorted(line, key=repr)) for line in lines]
    labels += ["1"]
    return Poset.from_sets(sets, labels)


def join(P: Poset, S):
    return P.join(S)


def meet(P: Poset, S):
    return P.meet(S)


def reduced(P: Poset) -> Poset:
    drop = {P.bottom, P.top} - {None}
    return P.subposet([i for i in range(P.n) if i not in drop], convex=True)


def interval(P: Poset, a, b) -> Poset:
    if not P.le(a, b):
        raise PosetError(f"{P.label(a)!r} is not below {P.label(b)!r}")
    idx = np.flatnonzero(P.order[a] & P.order[:, b])
    return P.subposet(idx, convex=True)


def product(P: Poset, Q: Poset, *more: Poset) -> Poset:
    """Cartesian product; labels are tuples of factor labels."""
    factors = [P, Q, *more]
    size = int(np.prod([F.n for F in factors]))
    budget.check("elements", size, "product poset")
    order = factors[0].order
    for F in factors[1:]:
        order = np.kron(order, F.order).astype(bool)
    shape = [F.n for F in factors]
    strides = [int(np.prod(shape[k + 1:])) for k in range(len(shape))]
    covers = []
    for k, F in enumerate(factors):
        others = [range(G.n) for j, G in enumerate(factors) if j != k]
        base_strides = [s for j, s in enumerate(strides) if j != k]
        for rest in itertools.product(*others):
            base = sum(x * s for x, s in zip(rest, base_strides))
            for a, b in F.covers:
                covers.append((base + a * strides[k], base + b * strides[k]))
    labels = [tuple(F.labels[i] for F, i in zip(factors, idx))
              for idx in itertools.product(*[range(F.n) for F in factors])]
    return Poset(labels, order, covers)


# -- lattice analysis ----------------------------------------------------------


@dataclass
class LatticeReport:
    is_lattice: bool
    is_graded: bool
    rank: int | None
    is_atomistic: bool
    is_semimodular: bool
    is_modular_rank: bool
    is_thick: bool
    is_geometric: bool
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "is_lattice": self.is_lattice, "is_graded": self.is_graded, "rank": self.rank,
            "is_atomistic": self.is_atomistic, "is_semimodular": self.is_semimodular,
            "is_modular_rank": self.is_modular_rank, "is_thick": self.is_thick,
            "is_geometric": self.is_geometric,
            "witnesses": {k: jsonable(v) for k, v in self.witnesses.items()},
        }


def thickness(P: Poset):
    """(thick, witness): every length-2 open interval has >= 3 elements."""
    if P.n == 0:
        return True, None
    if P.is_graded:
        r = P.rank_function
        c = P.cover_matrix
        two = (c @ c).tocoo()
        # graded: a < b with rank gap 2 always has an interior, all of it covers
        for a, b, cnt in sorted(zip(two.row.tolist(), two.col.tolist(), two.data.tolist())):
            if r[b] == r[a] + 2 and cnt < 3:
                interior = [int(x) for x in np.flatnonzero(P.order[a] & P.order[:, b]) if x not in (a, b)]
                return False, {"interval": [a, b], "interior": interior}
        return True, None
    lt = P.order.copy()
    np.fill_diagonal(lt, False)
    f = lt.astype(np.float32)
    inside = f @ f
    c = P.cover_matrix.toarray().astype(np.float32)
    via_covers = c @ c
    length_two = (inside > 0) & (via_covers == inside)
    bad = np.argwhere(length_two & (inside < 3))
    if bad.size:
        a, b = map(int, bad[0])
        interior = [int(x) for x in np.flatnonzero(lt[a] & lt[:, b])]
        return False, {"interval": [a, b], "interior": interior}
    return True, None


def analyze_lattice(P: Poset) -> LatticeReport:
    w = {}
    n = P.n
    graded = P.is_graded
    if not graded:
        w["graded"] = P.grading[1]
    rank = P.rank

    is_lattice = n > 0 and P.bottom is not None and P.top is not None
    if not is_lattice:
        w["lattice"] = {"reason": "missing bottom or top", "minimal": P.minimal, "maximal": P.maximal}
        jt = mt = None
    else:
        jt, mt = P.bound_tables
        bad = np.argwhere((jt < 0) | (mt < 0))
        if bad.size:
            is_lattice = False
            a, b = map(int, bad[0])
            w["lattice"] = {"pair": [a, b], "reason": "join or meet missing"}

    atomistic = semimodular = modular = False
    if is_lattice:
        atoms = P.atoms
        atomistic = True
        for x in range(n):
            below = [a for a in atoms if P.order[a, x]]
            if x == P.bottom:
                continue
            if not below or not np.array_equal(
                    np.logical_and.reduce(P.order[below], axis=0), P.order[x]):
                atomistic = False
                w["atomistic"] = {"element": x, "atoms_below": below}
                break
        if graded:
            r = P.rank_function
            lhs = r[:, None] + r[None, :]
            rhs = r[mt] + r[jt]
            off = ~np.eye(n, dtype=bool)
            bad = np.argwhere((lhs < rhs) & off)
            semimodular = bad.size == 0
            if not semimodular:
                w["semimodular"] = {"pair": list(map(int, bad[0]))}
            bad = np.argwhere(lhs != rhs)
            modular = bad.size == 0
            if not modular:
                w["modular_rank"] = {"pair": list(map(int, bad[0]))}
        else:
            w["semimodular"] = w["modular_rank"] = {"reason": "not graded"}
    else:
        w.setdefault("atomistic", {"reason": "not a lattice"})
        w["semimodular"] = w["modular_rank"] = {"reason": "not a lattice"}

    thick, tw = thickness(P)
    if not thick:
        w["thick"] = tw
    geometric = is_lattice and graded and atomistic and semimodular
    if not geometric:
        w["geometric"] = {"reason": "needs lattice, graded, atomistic and semimodular"}
    return LatticeReport(is_lattice, graded, rank, atomistic, semimodular,
                         modular, thick, geometric, w)


def is_modular_via_lines(P: Poset):
    """Every line meets every hyperplane above the bottom.

    Returns ``(True, None)`` or ``(False, (h, l))`` with the first disjoint
    hyperplane/line pair in index order.
    """
    if not P.is_graded or P.bottom is None or P.top is None:
        raise NotGraded("needs a graded lattice with bottom and top")
    r = P.rank
    lines = P.elements_of_rank(2)
    hyper = P.elements_of_rank(r - 1)
    atoms = P.atoms
    a_h = P.order[np.ix_(atoms, hyper)].astype(np.int64)
    a_l = P.order[np.ix_(atoms, lines)].astype(np.int64)
    common = a_h.T @ a_l
    bad = np.argwhere(common == 0)
    if bad.size:
        i, j = bad[0]
        return False, (hyper[i], lines[j])
    return True, None


# -- modular geometric factorization -------------------------------------------


@dataclass
class Decomposition:
    tops: list  # c_i, the join of each atom class
    classes: list  # atom classes
    factors: list  # interval posets [0, c_i]
    boolean_atoms: list  # atoms forming singleton classes
    product: Poset  # product of all factors
    phi: np.ndarray  # P index -> product index

    @property
    def projective_factors(self) -> list:
        return [F for F, cls in zip(self.factors, self.classes) if len(cls) > 1]


def decompose_modular_geometric(P: Poset, report: LatticeReport | None = None) -> Decomposition:
    report = report or analyze_lattice(P)
    if not (report.is_geometric and report.is_modular_rank):
        raise NotModularGeometric("lattice is not a modular geometric lattice")
    atoms = P.atoms
    parent = {a: a for a in atoms}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    jt, _ = P.bound_tables
    for a, b in itertools.combinations(atoms, 2):
        line = int(jt[a, b])
        if sum(1 for c in atoms if P.order[c, line]) >= 3:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for a in atoms:
        groups.setdefault(find(a), []).append(a)
    classes = [groups[k] for k in sorted(groups)]
    tops = [P.join(cls) for cls in classes]
    factors = [interval(P, P.bottom, c) for c in tops]
    boolean_atoms = [cls[0] for cls in classes if len(cls) == 1]

    if len(factors) == 1:
        Q = factors[0]
        phi = np.arange(P.n)
    else:
        Q = product(*factors)
        if Q.n != P.n:
            raise FactorizationCheckFailed(f"product of factors has {Q.n} elements, lattice has {P.n}")
        _, mt = P.bound_tables
        phi = np.zeros(P.n, dtype=np.int64)
        strides = [int(np.prod([F.n for F in factors[k + 1:]])) for k in range(len(factors))]
        local = [{g: k for k, g in enumerate(F.parent_indices)} for F in factors]
        for x in range(P.n):
            phi[x] = sum(loc[int(mt[x, c])] * s for loc, c, s in zip(local, tops, strides))
    if len(set(phi.tolist())) != P.n:
        raise FactorizationCheckFailed("meet projection is not injective")
    if not np.array_equal(Q.order[np.ix_(phi, phi)], P.order):
        raise FactorizationCheckFailed("meet projection is not an order isomorphism")
    return Decomposition(tops, classes, factors, boolean_atoms, Q, phi)

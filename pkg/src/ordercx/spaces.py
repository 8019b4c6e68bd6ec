"""Posets built from finite-field data.

``IsotropicPoset`` is the subspace lattice of F_q^m, or the poset of totally
isotropic subspaces of an alternating / Hermitian form.  It answers join and
order queries by linear algebra, so configurations can be checked in spaces
far too large to enumerate; ``.poset`` materializes the explicit ``Poset``
(with the subspace backref table) on demand.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import budget
from .errors import FieldError, NoUpperBound, VerificationFailed
from .gf import FieldElem, FieldSpec, field_make, field_of_order
from .linalg import (
    SubspaceFq,
    is_subspace,
    matmul,
    projective_points,
    rref,
    vector,
)
from .poset import Poset, canonical_json, lattice_of_flats, thickness

ALTERNATING = "alternating"
HERMITIAN = "hermitian"


@dataclass(frozen=True)
class FormSpec:
    """A non-degenerate form in hyperbolic-pair coordinates.

    Coordinates are ordered e_1..e_n, f_1..f_n and, for a Hermitian form on
    odd m, a final anisotropic e_{n+1} with <e_{n+1}, e_{n+1}> = 1.
    """

    kind: str
    spec: FieldSpec
    m: int

    def __post_init__(self):
        if self.kind not in (ALTERNATING, HERMITIAN):
            raise ValueError(f"unknown form kind {self.kind!r}")
        if self.m < 2:
            raise ValueError("forms need ambient dimension >= 2")
        if self.kind == ALTERNATING and self.m % 2:
            raise ValueError("alternating forms need even dimension")
        if self.kind == HERMITIAN and not self.spec.conjugation:
            raise FieldError("Hermitian forms need a field with conjugation")

    @property
    def layout(self) -> str:
        n = self.m // 2
        tail = f",e{n + 1}" if self.m % 2 else ""
        return f"e1..e{n},f1..f{n}{tail}"

    @property
    def witt_index(self) -> int:
        return self.m // 2

    @property
    def d(self) -> int:
        return self.witt_index - 1

    def e(self, i: int) -> int:
        """Coordinate of e_i (1-based)."""
        return i - 1

    def f(self, i: int) -> int:
        return self.m // 2 + i - 1

    @cached_property
    def gram(self) -> np.ndarray:
        spec, n = self.spec, self.m // 2
        g = np.zeros((self.m, self.m), dtype=np.int64)
        for i in range(1, n + 1):
            g[self.e(i), self.f(i)] = 1
            g[self.f(i), self.e(i)] = 1 if self.kind == HERMITIAN else spec.neg(1)
        if self.m % 2:
            g[self.m - 1, self.m - 1] = 1
        return g

    def values(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Matrix of <row_i, col_j>."""
        rows = np.atleast_2d(rows)
        cols = np.atleast_2d(cols)
        right = self.spec.vconj(cols) if self.kind == HERMITIAN else cols
        return matmul(self.spec, matmul(self.spec, rows, self.gram), right.T)

    def diagonal(self, rows: np.ndarray) -> np.ndarray:
        """<v, v> for every row v."""
        spec = self.spec
        rows = np.atleast_2d(rows)
        right = spec.vconj(rows) if self.kind == HERMITIAN else rows
        prod = spec.vmul(matmul(spec, rows, self.gram), right)
        out = np.zeros(len(rows), dtype=np.int64)
        for k in range(self.m):
            out = spec.vadd(out, prod[:, k])
        return out

    def to_json(self) -> dict:
        return {"kind": self.kind, "q": self.spec.q, "m": self.m, "layout": self.layout}


def alternating_form(q: int, d: int) -> FormSpec:
    return FormSpec(ALTERNATING, field_of_order(q), 2 * d + 2)


def hermitian_form(q: int, m: int) -> FormSpec:
    """Hermitian form on F_{q^2}^m; ``q`` is the order of the fixed subfield."""
    base = field_of_order(q)
    return FormSpec(HERMITIAN, field_make(base.p, 2 * base.n, conjugation=True), m)


def form_from_json(obj: dict) -> FormSpec:
    q, m = int(obj["q"]), int(obj["m"])
    kind = obj["kind"]
    spec = field_of_order(q, conjugation=(kind == HERMITIAN))
    form = FormSpec(kind, spec, m)
    if "layout" in obj and obj["layout"] != form.layout:
        raise ValueError(f"unsupported basis layout {obj['layout']!r}")
    return form


def form_eval(form: FormSpec, v, w) -> FieldElem:
    spec = form.spec
    v = vector(spec, v) if not isinstance(v, np.ndarray) else v
    w = vector(spec, w) if not isinstance(w, np.ndarray) else w
    if v.shape != (form.m,) or w.shape != (form.m,):
        from .errors import DimensionMismatch

        raise DimensionMismatch(f"form on F^{form.m} applied to vectors {v.shape}, {w.shape}")
    return spec.elem(int(form.values(v, w)[0, 0]))


class IsotropicPoset:
    """Subspace lattice (``form=None``) or polar-space poset of a form."""

    def __init__(self, spec: FieldSpec, m: int, form: FormSpec | None = None):
        if form is not None and (form.spec != spec or form.m != m):
            raise ValueError("form does not live on F^m over the given field")
        self.spec = spec
        self.m = m
        self.form = form

    def __repr__(self):
        if self.form is None:
            return f"L(F_{self.spec.q}^{self.m})"
        return f"Polar({self.form.kind}, F_{self.spec.q}^{self.m})"

    # -- host protocol -----------------------------------------------------

    @cached_property
    def bottom(self) -> SubspaceFq:
        return rref(self.spec, [], self.m)

    @cached_property
    def top(self):
        if self.form is not None:
            return None  # maximal isotropic subspaces are not unique
        return rref(self.spec, np.eye(self.m, dtype=np.int64), self.m)

    def span(self, vectors) -> SubspaceFq:
        return rref(self.spec, vectors, self.m)

    def is_totally_isotropic(self, U: SubspaceFq) -> bool:
        if self.form is None or U.dim == 0:
            return True
        return not self.form.values(U.matrix, U.matrix).any()

    def join(self, elems) -> SubspaceFq:
        elems = list(elems)
        if not elems:
            return self.bottom
        stacked = np.vstack([U.matrix for U in elems])
        W = rref(self.spec, stacked, self.m)
        if not self.is_totally_isotropic(W):
            raise NoUpperBound(f"span of {elems} is not totally isotropic")
        return W

    def le(self, a: SubspaceFq, b: SubspaceFq) -> bool:
        return is_subspace(a, b)

    def is_atom(self, a) -> bool:
        return isinstance(a, SubspaceFq) and a.dim == 1 and self.is_totally_isotropic(a)

    def contains_element(self, a) -> bool:
        return (isinstance(a, SubspaceFq) and a.m == self.m and a.spec.q == self.spec.q
                and self.is_totally_isotropic(a))

    def label(self, a: SubspaceFq):
        return repr(a)

    def descriptor(self) -> dict:
        if self.form is None:
            return {"kind": "subspace", "q": self.spec.q, "m": self.m}
        return {"kind": "polar", "form": self.form.to_json()}

    def digest(self) -> str:
        return hashlib.sha256(canonical_json(self.descriptor()).encode()).hexdigest()

    # -- materialization ---------------------------------------------------

    @cached_property
    def _layers(self):
        """BFS over covers: extend U by isotropic points of U-perp outside U.

        A point reduced to zero on the pivot columns of U represents exactly
        one cover of U, so no cover is produced twice from the same U.
        """
        spec, m, form = self.spec, self.m, self.form
        budget.check("vectors", spec.q**m, repr(self))
        points = projective_points(spec, m)
        if form is not None:
            iso = ~form.diagonal(points).astype(bool)
        else:
            iso = np.ones(len(points), dtype=bool)
        leads = np.argmax(points != 0, axis=1)
        cap = budget.limit("elements")
        keys = {(): 0}
        bases = [()]
        covers = []
        frontier = [()]
        while frontier:
            nxt = []
            for key in frontier:
                u_idx = keys[key]
                U = np.array(key, dtype=np.int64).reshape(len(key), m) if key else np.zeros((0, m), np.int64)
                mask = iso.copy()
                if len(key):
                    piv = [int(np.flatnonzero(row)[0]) for row in U]
                    mask &= ~points[:, piv].any(axis=1)
                    if form is not None:
                        mask &= ~form.values(U, points).any(axis=0)
                for t in np.flatnonzero(mask):
                    v = points[t]
                    c = leads[t]
                    rows = [v]
                    for row in U:
                        if row[c]:
                            row = spec.vsub(row, spec.vmul(row[c], v))
                        rows.append(row)
                    rows.sort(key=lambda r: int(np.flatnonzero(r)[0]))
                    new = tuple(tuple(int(x) for x in r) for r in rows)
                    idx = keys.get(new)
                    if idx is None:
                        idx = keys[new] = len(bases)
                        bases.append(new)
                        nxt.append(new)
                        if len(bases) > cap:
                            budget.check("elements", len(bases), repr(self))
                    covers.append((u_idx, idx))
            frontier = nxt
        return bases, covers

    @cached_property
    def subspaces(self) -> list:
        """Backref table: element index -> SubspaceFq (sorted by dim, basis)."""
        bases, _ = self._layers
        subs = [SubspaceFq(self.spec, self.m, b) for b in bases]
        return sorted(subs, key=SubspaceFq.sort_key)

    @cached_property
    def poset(self) -> Poset:
        bases, covers = self._layers
        pos = {U.basis: i for i, U in enumerate(self.subspaces)}
        remap = [pos[b] for b in bases]
        labels = [U.basis for U in self.subspaces]
        P = Poset.from_covers(labels, [(remap[a], remap[b]) for a, b in covers])
        self._check_witt(P)
        return P

    def _check_witt(self, P: Poset):
        if self.form is None:
            return
        dims = {self.subspaces[i].dim for i in P.maximal}
        if dims != {self.form.witt_index}:
            raise VerificationFailed(
                f"maximal isotropic subspaces have dimensions {sorted(dims)}, "
                f"expected {self.form.witt_index}")

    def index_of(self, U: SubspaceFq) -> int:
        return self.poset.index[U.basis]

    def element(self, i: int) -> SubspaceFq:
        return self.subspaces[i]

    @cached_property
    def is_thick(self) -> bool:
        return thickness(self.poset)[0]

    def to_json(self) -> dict:
        return {"space": self.descriptor(), "poset": self.poset.to_json()}


def subspace_lattice(q: int, m: int) -> IsotropicPoset:
    return IsotropicPoset(field_of_order(q), m)


def isotropic_poset(form: FormSpec) -> IsotropicPoset:
    return IsotropicPoset(form.spec, form.m, form)


def space_from_descriptor(desc: dict) -> IsotropicPoset:
    if desc["kind"] == "subspace":
        return subspace_lattice(int(desc["q"]), int(desc["m"]))
    if desc["kind"] == "polar":
        return isotropic_poset(form_from_json(desc["form"]))
    raise ValueError(f"unknown space kind {desc['kind']!r}")


def affine_plane_flats(q: int) -> Poset:
    """Lattice of flats of the affine plane AG(2, q), q prime.

    Rank 3, thick (q >= 3), geometric and non-modular: parallel lines meet
    only in the bottom element.
    """
    spec = field_of_order(q)
    if spec.n != 1:
        raise FieldError("affine_plane_flats supports prime q only")
    points = list(itertools.product(range(q), repeat=2))
    lines = set()
    for p in points:
        for direction in [(0, 1)] + [(1, s) for s in range(q)]:
            line = frozenset(((p[0] + t * direction[0]) % q, (p[1] + t * direction[1]) % q)
                             for t in range(q))
            lines.add(line)
    lines = sorted(lines, key=lambda s: sorted(s))
    return lattice_of_flats(points, [sorted(line) for line in lines])

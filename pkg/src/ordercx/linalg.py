"""Exact linear algebra over F_q on numpy arrays of field codes.

Subspaces are kept in reduced row echelon form, which makes them canonical:
two subspaces are equal exactly when their ``basis`` tuples are equal, so a
``SubspaceFq`` can key dicts and sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import budget
from .errors import DimensionMismatch, FieldError, NotCanonical
from .gf import FieldElem, FieldSpec, field_of_order


def vector(spec: FieldSpec, entries) -> np.ndarray:
    """Coerce a sequence of ints / FieldElems into an array of codes."""
    out = []
    for x in entries:
        if isinstance(x, FieldElem):
            if x.spec.q != spec.q:
                raise FieldError("vector entry from a different field")
            out.append(x.value)
        else:
            x = int(x)
            if not 0 <= x < spec.q:
                raise FieldError(f"entry {x} is not a code of {spec!r}")
            out.append(x)
    return np.array(out, dtype=np.int64)


def unit(m: int, i: int) -> np.ndarray:
    """Standard basis vector e_{i+1} (0-based ``i``)."""
    v = np.zeros(m, dtype=np.int64)
    v[i] = 1
    return v


def _as_matrix(spec, rows, m):
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        a = rows.astype(np.int64, copy=True)
    else:
        rows = [vector(spec, r) if not isinstance(r, np.ndarray) else r for r in rows]
        if not rows:
            if m is None:
                raise DimensionMismatch("ambient dimension needed for an empty row list")
            return np.zeros((0, m), dtype=np.int64)
        a = np.array(rows, dtype=np.int64)
    if a.ndim != 2:
        raise DimensionMismatch("rows must have a common length")
    if m is not None and a.shape[1] != m:
        raise DimensionMismatch(f"rows have length {a.shape[1]}, expected {m}")
    if a.size and (a.min() < 0 or a.max() >= spec.q):
        raise FieldError(f"matrix entries are not codes of {spec!r}")
    return a


def rref_matrix(spec: FieldSpec, a: np.ndarray):
    """Return (R, pivots) with R the nonzero rows of the RREF of ``a``."""
    a = a.astype(np.int64, copy=True)
    rows, cols = a.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        lead = a[r, c]
        if lead != 1:
            a[r] = spec.vmul(a[r], spec.vinv(lead))
        factors = a[:, c].copy()
        factors[r] = 0
        if factors.any():
            a = spec.vsub(a, spec.vmul(factors[:, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


@dataclass(frozen=True)
class SubspaceFq:
    """A subspace of F_q^m given by its canonical RREF basis."""

    spec: FieldSpec
    m: int
    basis: tuple  # tuple of row tuples of codes

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def q(self) -> int:
        return self.spec.q

    @cached_property
    def matrix(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, self.m), dtype=np.int64)
        return np.array(self.basis, dtype=np.int64)

    @cached_property
    def pivots(self) -> tuple:
        return tuple(next(i for i, x in enumerate(row) if x) for row in self.basis)

    def sort_key(self):
        return (self.dim, tuple(itertools.chain.from_iterable(self.basis)))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __repr__(self):
        rows = ["(" + ",".join(self.spec.format_code(x) for x in row) + ")"
                for row in self.basis]
        return "<" + ", ".join(rows) + ">"

    def to_json(self) -> dict:
        return {"q": self.q, "m": self.m, "basis": [list(r) for r in self.basis]}


def _subspace(spec, m, r):
    return SubspaceFq(spec, m, tuple(tuple(int(x) for x in row) for row in r))


def rref(spec: FieldSpec, rows, m: int | None = None) -> SubspaceFq:
    a = _as_matrix(spec, rows, m)
    r, _ = rref_matrix(spec, a)
    return _subspace(spec, a.shape[1], r)


def span(spec: FieldSpec, vectors, m: int | None = None) -> SubspaceFq:
    return rref(spec, vectors, m)


def dim(U: SubspaceFq) -> int:
    return U.dim


def _check_same(U, W):
    if U.m != W.m:
        raise DimensionMismatch(f"ambient dimensions {U.m} and {W.m} differ")
    if U.spec.q != W.spec.q:
        raise FieldError("subspaces over different fields")


def reduce_vector(U: SubspaceFq, v) -> np.ndarray:
    spec = U.spec
    v = vector(spec, v) if not isinstance(v, np.ndarray) else v.astype(np.int64)
    if v.shape != (U.m,):
        raise DimensionMismatch(f"vector of length {v.shape} in ambient dimension {U.m}")
    for row, c in zip(U.matrix, U.pivots):
        if v[c]:
            v = spec.vsub(v, spec.vmul(v[c], row))
    return v


def contains(U: SubspaceFq, v) -> bool:
    return not reduce_vector(U, v).any()


def is_subspace(U: SubspaceFq, W: SubspaceFq) -> bool:
    """U <= W."""
    _check_same(U, W)
    if U.dim > W.dim:
        return False
    return all(contains(W, row) for row in U.matrix)


def subspace_sum(U: SubspaceFq, W: SubspaceFq) -> SubspaceFq:
    _check_same(U, W)
    return rref(U.spec, np.vstack([U.matrix, W.matrix]), U.m)


def null_space(spec: FieldSpec, a: np.ndarray) -> np.ndarray:
    """Basis (as rows) of {x : a @ x = 0}."""
    k, m = a.shape
    r, pivots = rref_matrix(spec, a)
    free = [c for c in range(m) if c not in pivots]
    out = np.zeros((len(free), m), dtype=np.int64)
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, c in enumerate(pivots):
            out[t, c] = spec.neg(int(r[i, f]))
    return out


def intersect(U: SubspaceFq, W: SubspaceFq) -> SubspaceFq:
    """U cap W via the kernel of the stacked bases.

    A kernel vector (a, b) of [U; W]^T gives a @ U = -(b @ W), an element of
    the intersection; these elements span it.
    """
    _check_same(U, W)
    spec = U.spec
    if U.dim == 0 or W.dim == 0:
        return rref(spec, [], U.m)
    stacked = np.vstack([U.matrix, W.matrix])
    ker = null_space(spec, stacked.T)
    if ker.size == 0:
        return rref(spec, [], U.m)
    coeffs = ker[:, : U.dim]
    vecs = matmul(spec, coeffs, U.matrix)
    return rref(spec, vecs, U.m)


def matmul(spec: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if spec.n == 1 and spec.p < 2**20:
        return (a @ b) % spec.p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = spec.vadd(out, spec.vmul(a[:, k][:, None], b[k][None, :]))
    return out


def all_vectors(spec: FieldSpec, m: int) -> np.ndarray:
    """Every vector of F_q^m as rows, in lexicographic order."""
    budget.check("vectors", spec.q**m, f"F_{spec.q}^{m}")
    grids = np.indices((spec.q,) * m).reshape(m, -1).T
    return grids.astype(np.int64)


def projective_points(spec: FieldSpec, m: int) -> np.ndarray:
    """Normalized representatives (leading entry 1) of the 1-spaces of F_q^m."""
    vecs = all_vectors(spec, m)[1:]
    lead = np.argmax(vecs != 0, axis=1)
    return vecs[vecs[np.arange(len(vecs)), lead] == 1]


def _cells(m, k):
    """Pivot sets with the free (row, column) slots of their RREF cells."""
    for piv in itertools.combinations(range(m), k):
        free = [(r, c) for r, p in enumerate(piv) for c in range(p + 1, m) if c not in piv]
        yield piv, free


def count_subspaces_by_cells(q: int, m: int, k: int) -> int:
    return sum(q ** len(free) for _, free in _cells(m, k))


def enumerate_subspaces(spec: FieldSpec, m: int, k: int | None = None) -> list:
    """All subspaces of F_q^m (or those of dimension ``k``), sorted by (dim, basis)."""
    budget.check("vectors", spec.q**m, f"F_{spec.q}^{m}")
    dims = range(m + 1) if k is None else [k]
    total = sum(count_subspaces_by_cells(spec.q, m, kk) for kk in dims)
    budget.check("elements", total, f"subspaces of F_{spec.q}^{m}")
    out = []
    for kk in dims:
        layer = []
        for piv, free in _cells(m, kk):
            for values in itertools.product(range(spec.q), repeat=len(free)):
                rows = [[0] * m for _ in range(kk)]
                for r, c in enumerate(piv):
                    rows[r][c] = 1
                for (r, c), x in zip(free, values):
                    rows[r][c] = x
                layer.append(SubspaceFq(spec, m, tuple(tuple(r) for r in rows)))
        layer.sort(key=SubspaceFq.sort_key)
        out.extend(layer)
    return out


def subspace_from_json(obj: dict, spec: FieldSpec | None = None) -> SubspaceFq:
    q, m = int(obj["q"]), int(obj["m"])
    if spec is None:
        spec = field_of_order(q)
    elif spec.q != q:
        raise FieldError(f"subspace over F_{q} loaded into {spec!r}")
    basis = tuple(tuple(int(x) for x in row) for row in obj["basis"])
    U = SubspaceFq(spec, m, basis)
    if basis and rref(spec, list(basis), m).basis != basis:
        raise NotCanonical(f"basis {obj['basis']} is not in reduced row echelon form")
    return U

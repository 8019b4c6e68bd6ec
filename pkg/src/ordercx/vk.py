"""Mod-2 van Kampen obstruction of a d-complex in R^{2d}.

Vertices go to the moment curve (t, t^2, .., t^{2d}), which puts every
vertex set in general position.  For two disjoint d-faces the 2d+2 points
have a one-dimensional affine dependency; the open simplices cross (in one
point) exactly when the signs of that dependency separate the two faces.
This gives the intersection cocycle on unordered disjoint d-face pairs; the
obstruction vanishes iff the cocycle is a coboundary over GF(2).
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from . import budget
from .errors import DimensionMismatch, OrderCxError
from .simplicial import SimplicialComplex

MAX_RETRIES = 5


def disjoint_pairs(K: SimplicialComplex, total_dim: int) -> list:
    """Unordered pairs {s, t} of disjoint faces with dim s + dim t = total_dim.

    Each pair is a tuple (s, t) with s < t in face order.
    """
    by_dim = {}
    for f in K.faces:
        by_dim.setdefault(len(f) - 1, []).append(f)
    out = []
    cap = budget.limit("pairs")
    for a in range(0, total_dim // 2 + 1):
        b = total_dim - a
        left, right = by_dim.get(a, []), by_dim.get(b, [])
        if a == b:
            candidates = itertools.combinations(left, 2)
        else:
            candidates = itertools.product(left, right)
        for s, t in candidates:
            if not set(s) & set(t):
                out.append((s, t) if (len(s), s) <= (len(t), t) else (t, s))
                if len(out) > cap:
                    budget.check("pairs", len(out), f"disjoint face pairs of total dimension {total_dim}")
    return sorted(out, key=lambda p: ((len(p[0]), p[0]), (len(p[1]), p[1])))


def moment_parameters(n: int, seed: int = 0, attempt: int = 0) -> list:
    """Distinct integer parameters; t_k = k + 1 for the default seed."""
    if seed == 0 and attempt == 0:
        return list(range(1, n + 1))
    rng = random.Random(seed * 1000 + attempt)
    return rng.sample(range(1, 20 * n + 20), n)


def _kernel_vector(points):
    """The affine dependency of len(points) = dim + 2 points, exactly.

    Returns None if the dependency space is not one-dimensional.
    """
    n = len(points)
    rows = [[Fraction(p[k]) for p in points] for k in range(len(points[0]))]
    rows.append([Fraction(1)] * n)
    piv_cols = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(n) if c not in piv_cols]
    if len(free) != 1:
        return None
    fc = free[0]
    vec = [Fraction(0)] * n
    vec[fc] = Fraction(1)
    for i, c in enumerate(piv_cols):
        vec[c] = -rows[i][fc]
    return vec


def _crosses(points, s, t):
    """(crosses, generic) for disjoint faces s, t placed at ``points``."""
    verts = list(s) + list(t)
    lam = _kernel_vector([points[v] for v in verts])
    if lam is None or any(x == 0 for x in lam):
        return False, False
    signs = [x > 0 for x in lam]
    side_s, side_t = set(signs[: len(s)]), set(signs[len(s):])
    return (len(side_s) == 1 and len(side_t) == 1 and side_s != side_t), True


def _placement(K: SimplicialComplex, d: int, seed: int, pairs):
    for attempt in range(MAX_RETRIES + 1):
        ts = moment_parameters(K.n_vertices, seed, attempt)
        points = [[t**k for k in range(1, 2 * d + 1)] for t in ts]
        values = []
        generic = True
        for s, t in pairs:
            hit, ok = _crosses(points, s, t)
            if not ok:
                generic = False
                break
            values.append(int(hit))
        if generic:
            return ts, values
    raise OrderCxError("placement stayed degenerate after retries")


def intersection_cocycle(K: SimplicialComplex, seed: int = 0):
    """(pair basis, cocycle values, parameters) of the moment-curve placement."""
    d = K.dim
    if d < 1:
        raise OrderCxError("the obstruction needs a complex of dimension >= 1")
    pairs = disjoint_pairs(K, 2 * d)
    ts, values = _placement(K, d, seed, pairs)
    return pairs, values, ts


def gf2_solve(A, b):
    """Solve A x = b over GF(2) with bitset rows; free variables are set to 0.

    Returns the solution as a list of 0/1, or None when the system is
    inconsistent.
    """
    A = [[int(x) & 1 for x in row] for row in A]
    b = [int(x) & 1 for x in b]
    if len(A) != len(b):
        raise DimensionMismatch(f"{len(A)} equations but {len(b)} right-hand sides")
    ncols = len(A[0]) if A else 0
    if any(len(row) != ncols for row in A):
        raise DimensionMismatch("rows of unequal length")
    rows = []
    for row, rhs in zip(A, b):
        bits = rhs << ncols
        for c, x in enumerate(row):
            if x:
                bits |= 1 << c
        rows.append(bits)
    pivots = []
    r = 0
    for c in range(ncols):
        mask = 1 << c
        pr = next((i for i in range(r, len(rows)) if rows[i] & mask), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & mask:
                rows[i] ^= rows[r]
        pivots.append(c)
        r += 1
    low = (1 << ncols) - 1
    for row in rows[r:]:
        if not row & low and row >> ncols:
            return None
    x = [0] * ncols
    for i, c in enumerate(pivots):
        x[c] = (rows[i] >> ncols) & 1
    return x


def coboundary_matrix(K: SimplicialComplex, rows_pairs, col_pairs):
    """delta{a, b} = sum of {a + v, b} and {a, b + v} over disjoint cofaces."""
    row_index = {frozenset((s, t)): k for k, (s, t) in enumerate(rows_pairs)}
    faces = K.face_set
    A = [[0] * len(col_pairs) for _ in rows_pairs]
    nv = K.n_vertices
    for c, (a, b) in enumerate(col_pairs):
        used = set(a) | set(b)
        for v in range(nv):
            if v in used:
                continue
            for grow, keep in ((a, b), (b, a)):
                bigger = tuple(sorted(grow + (v,)))
                if bigger in faces:
                    k = row_index.get(frozenset((bigger, keep)))
                    if k is not None:
                        A[k][c] ^= 1
    return A


def _ordered_system(K, pairs, values, gens):
    """Same question on ordered pairs, with symmetry imposed as equations."""
    faces = K.face_set
    ordered_rows = [(s, t) for s, t in pairs] + [(t, s) for s, t in pairs]
    rhs = values + values
    ordered_cols = [(a, b) for a, b in gens] + [(b, a) for a, b in gens]
    col_index = {p: k for k, p in enumerate(ordered_cols)}
    row_index = {p: k for k, p in enumerate(ordered_rows)}
    A = [[0] * len(ordered_cols) for _ in ordered_rows]
    for (a, b), c in col_index.items():
        used = set(a) | set(b)
        for v in range(K.n_vertices):
            if v in used:
                continue
            first = tuple(sorted(a + (v,)))
            if first in faces and (first, b) in row_index:
                A[row_index[(first, b)]][c] ^= 1
            second = tuple(sorted(b + (v,)))
            if second in faces and (a, second) in row_index:
                A[row_index[(a, second)]][c] ^= 1
    for a, b in gens:
        row = [0] * len(ordered_cols)
        row[col_index[(a, b)]] = 1
        row[col_index[(b, a)]] = 1
        A.append(row)
        rhs.append(0)
    return A, rhs


def vk_obstruction_mod2(K: SimplicialComplex, seed: int = 0, ordered: bool = False) -> dict:
    """Decide the mod-2 obstruction; ``verdict`` is "zero" or "nonzero"."""
    d = K.dim
    pairs, values, ts = intersection_cocycle(K, seed)
    gens = disjoint_pairs(K, 2 * d - 1)
    if ordered:
        A, b = _ordered_system(K, pairs, values, gens)
    else:
        A, b = coboundary_matrix(K, pairs, gens), values
    if not A or not A[0]:
        solvable = not any(b)
    else:
        solvable = gf2_solve(A, b) is not None
    return {
        "d": d,
        "pairs_2d": len(pairs),
        "pairs_2d_minus_1": len(gens),
        "cocycle_weight": sum(values),
        "seed": seed,
        "parameters": ts,
        "formulation": "ordered" if ordered else "unordered",
        "verdict": "zero" if solvable else "nonzero",
    }

"""Reference computations used only by the tests.

Each one is deliberately naive and shares no code with the package.
"""

import itertools
from fractions import Fraction


def gaussian_binomial(m: int, k: int, q: int) -> int:
    """[m choose k]_q as a product of (q^(m-i) - 1) / (q^(i+1) - 1)."""
    if k < 0 or k > m:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def span_set(vectors, p: int):
    """All F_p-linear combinations, as a frozenset of tuples (p prime)."""
    vectors = [tuple(v) for v in vectors]
    m = len(vectors[0])
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        out.add(tuple(sum(c * v[k] for c, v in zip(coeffs, vectors)) % p for k in range(m)))
    return frozenset(out)


def brute_weak_independent(rows, p: int) -> bool:
    """Disjoint faces of D_3^{*(d+1)} must span different subspaces."""
    d1 = len(rows)
    verts = [(i, j) for i in range(d1) for j in range(3)]
    faces = []
    for choice in itertools.product(range(4), repeat=d1):
        face = frozenset((i, j - 1) for i, j in enumerate(choice) if j)
        if face:
            faces.append(face)
    spans = {f: span_set([rows[i][j] for i, j in f], p) for f in faces}
    for a, b in itertools.combinations(faces, 2):
        if not a & b and spans[a] == spans[b]:
            return False
    assert len(verts) == 3 * d1
    return True


def segments_cross_on_parabola(a, b, c, e) -> bool:
    """Edges (a, b), (c, e) with endpoints on the moment curve cross iff they interlace."""
    a, b = sorted((a, b))
    c, e = sorted((c, e))
    return a < c < b < e or c < a < e < b


def segments_cross_exact(p1, p2, p3, p4) -> bool:
    """Proper crossing of two planar segments by orientation signs."""
    def orient(a, b, c):
        return (Fraction(b[0]) - a[0]) * (Fraction(c[1]) - a[1]) - (Fraction(b[1]) - a[1]) * (Fraction(c[0]) - a[0])
    d1, d2 = orient(p3, p4, p1), orient(p3, p4, p2)
    d3, d4 = orient(p1, p2, p3), orient(p1, p2, p4)
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def symplectic_count(q: int, n: int, k: int) -> int:
    """Totally isotropic k-spaces of a symplectic 2n-space over F_q."""
    num = den = 1
    for i in range(k):
        num *= q ** (2 * (n - i)) - 1
        den *= q ** (i + 1) - 1
    return num // den


def hermitian_count(q: int, m: int, k: int) -> int:
    """Totally isotropic k-spaces of a Hermitian m-space over F_{q^2}."""
    num = den = 1
    for i in range(m - 2 * k + 1, m + 1):
        num *= q**i - (-1) ** i
    for i in range(1, k + 1):
        den *= q ** (2 * i) - 1
    return num // den


def random_atom_grid(rng, atoms, d: int):
    """(d+1) x 3 grid of atoms, each row without repeats."""
    return [rng.sample(list(atoms), 3) for _ in range(d + 1)]

import itertools

import numpy as np
import pytest

from ordercx.errors import FieldError, NoUpperBound
from ordercx.gf import field_of_order
from ordercx.linalg import enumerate_subspaces
from ordercx.poset import analyze_lattice
from ordercx.spaces import (
    FormSpec,
    alternating_form,
    form_eval,
    form_from_json,
    hermitian_form,
    isotropic_poset,
    space_from_descriptor,
    subspace_lattice,
)

from oracles import hermitian_count, symplectic_count


def naive_iso(form, U):
    """<u, v> = 0 for all basis pairs, via scalar field arithmetic."""
    F = form.spec
    for u, v in itertools.product(U.basis, repeat=2):
        total = 0
        for a in range(form.m):
            for b in range(form.m):
                g = int(form.gram[a, b])
                if g:
                    w = F.conj(v[b]) if form.kind == "hermitian" else v[b]
                    total = F.add(total, F.mul(F.mul(u[a], g), w))
        if total:
            return False
    return True


@pytest.mark.parametrize("q,d", [(2, 1), (3, 1), (2, 2)])
def test_symplectic_counts(q, d):
    H = isotropic_poset(alternating_form(q, d))
    n = d + 1
    for k in range(n + 1):
        got = sum(1 for U in H.subspaces if U.dim == k)
        assert got == symplectic_count(q, n, k)
    assert analyze_lattice(H.poset).is_thick or d == 0


@pytest.mark.parametrize("q,m", [(2, 4), (2, 5), (3, 4)])
def test_hermitian_counts(q, m):
    H = isotropic_poset(hermitian_form(q, m))
    for k in range(m // 2 + 1):
        assert sum(1 for U in H.subspaces if U.dim == k) == hermitian_count(q, m, k)
    assert H.is_thick


@pytest.mark.parametrize("form", [alternating_form(2, 1), alternating_form(3, 1), hermitian_form(2, 3)])
def test_bfs_matches_brute_force_filter(form):
    H = isotropic_poset(form)
    brute = [U for U in enumerate_subspaces(form.spec, form.m) if naive_iso(form, U)]
    assert sorted(U.basis for U in H.subspaces) == sorted(U.basis for U in brute)


def test_gram_layout_and_form_values():
    form = alternating_form(3, 1)
    assert form.layout == "e1..e2,f1..f2"
    F = form.spec
    e1, f1 = np.eye(4, dtype=np.int64)[[form.e(1), form.f(1)]]
    assert form_eval(form, e1, f1) == F.one
    assert form_eval(form, f1, e1) == -F.one
    assert form_eval(form, e1, e1) == F.zero
    h = hermitian_form(2, 3)
    assert h.layout == "e1..e1,f1..f1,e2"
    assert form_eval(h, [0, 0, 1], [0, 0, 1]) == h.spec.one


def test_hermitian_form_is_hermitian():
    form = hermitian_form(3, 4)
    F = form.spec
    rng = np.random.default_rng(5)
    for _ in range(20):
        v, w = rng.integers(0, F.q, size=(2, form.m))
        assert form_eval(form, v, w) == form_eval(form, w, v).conjugate()


def test_join_raises_outside_isotropic_range():
    H = isotropic_poset(alternating_form(2, 1))
    e1 = H.span([[1, 0, 0, 0]])
    f1 = H.span([[0, 0, 1, 0]])
    e2 = H.span([[0, 1, 0, 0]])
    assert H.join([e1, e2]).dim == 2
    with pytest.raises(NoUpperBound):
        H.join([e1, f1])
    assert H.top is None and H.bottom.dim == 0


def test_subspace_lattice_host():
    L = subspace_lattice(2, 3)
    assert L.top.dim == 3
    a, b = L.span([[1, 0, 0]]), L.span([[0, 1, 0]])
    assert L.le(a, L.join([a, b])) and L.is_atom(a) and not L.is_atom(L.join([a, b]))
    assert L.index_of(a) in L.poset.atoms and L.element(L.index_of(a)) == a


def test_descriptors_round_trip():
    for host in (subspace_lattice(3, 2), isotropic_poset(hermitian_form(2, 4))):
        again = space_from_descriptor(host.descriptor())
        assert again.digest() == host.digest()
    assert form_from_json(alternating_form(2, 2).to_json()) == alternating_form(2, 2)


def test_form_errors():
    with pytest.raises(ValueError):
        FormSpec("alternating", field_of_order(3), 3)
    with pytest.raises(FieldError):
        FormSpec("hermitian", field_of_order(3), 4)
    with pytest.raises(ValueError):
        form_from_json({"kind": "alternating", "q": 2, "m": 4, "layout": "e1,f1,e2,f2"})

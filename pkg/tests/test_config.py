import json
import random

import pytest
from hypothesis import given, strategies as st, HealthCheck, settings

from ordercx.config import (
    AtomConfiguration,
    _face_joins,
    _weak_criterion,
    _weak_definitional,
    certify_nonembeddability,
    conclusion_text,
    config_from_json,
    construct_fano_example,
    construct_geometric,
    construct_hermitian,
    construct_symplectic,
    construct_typeA,
    construct_typeA_q2,
    indconf_criterion,
    is_extendable,
    is_independent,
    is_weakly_independent,
    merge_product_configs,
    verify_certificate,
    verify_configuration,
)
from ordercx.errors import InvalidConfiguration, NotExtendable, QTooSmall
from ordercx.poset import boolean_lattice, lattice_of_flats
from ordercx.spaces import affine_plane_flats, subspace_lattice

from oracles import brute_weak_independent, random_atom_grid

L24 = subspace_lattice(2, 4)
L33 = subspace_lattice(3, 3)


def test_fano_example_is_weak_but_not_independent():
    cfg = construct_fano_example()
    ok, w = is_independent(None, cfg)
    assert not ok
    assert w["alpha"] == {"I": [1, 2], "j": [1, 2]} and w["beta"] == {"I": [1, 2], "j": [1, 3]}
    assert is_weakly_independent(None, cfg) == (True, None)
    rep = verify_configuration(cfg)
    assert rep.ok and rep.d == 1 and rep.conclusion == conclusion_text(1)
    assert not rep.indconf_criterion


@pytest.mark.parametrize("q", [3, 4, 5])
@pytest.mark.parametrize("d", [1, 2])
def test_typeA(q, d):
    cfg = construct_typeA(q, d)
    assert is_independent(None, cfg)[0] and indconf_criterion(None, cfg)[0]
    assert cfg.atom(1, 1).basis == ((1,) + (0,) * (d + 1),)


def test_typeA_needs_three_scalars():
    with pytest.raises(QTooSmall):
        construct_typeA(2, 2)


@pytest.mark.parametrize("d", [2, 3])
def test_typeA_q2(d):
    cfg = construct_typeA_q2(d)
    assert is_weakly_independent(None, cfg)[0]
    assert not is_independent(None, cfg)[0]


@pytest.mark.parametrize("q,d", [(2, 1), (3, 1)])
def test_symplectic(q, d):
    cfg = construct_symplectic(q, d)
    assert is_independent(None, cfg)[0] and indconf_criterion(None, cfg)[0]


def test_hermitian():
    cfg = construct_hermitian(2, 4)
    assert is_independent(None, cfg)[0]
    lam_row = cfg.grid[0][1]
    assert cfg.host.is_atom(lam_row)


def test_grid_validation():
    P = L24.poset
    a = P.atoms
    with pytest.raises(InvalidConfiguration):
        AtomConfiguration([[a[0], a[0], a[1]]], P)
    with pytest.raises(InvalidConfiguration):
        AtomConfiguration([[a[0], a[1]]], P)
    with pytest.raises(InvalidConfiguration):
        AtomConfiguration([[a[0], a[1], P.top]], P)


def test_non_extendable_witness():
    P = subspace_lattice(2, 2).poset
    a = P.atoms
    cfg = AtomConfiguration([a, a], P)
    ok, w = is_extendable(None, cfg)
    assert not ok and w["reason"] == "join is the top element"
    with pytest.raises(NotExtendable):
        is_independent(None, cfg)
    rep = verify_configuration(cfg)
    assert not rep.ok and "extendable" in rep.witnesses


def test_certificate_json_round_trip():
    rep = verify_configuration(construct_typeA(3, 1))
    obj = json.loads(json.dumps(rep.to_json()))
    again = verify_certificate(obj)
    assert again.to_json() == rep.to_json()
    cfg = config_from_json(obj["config"], L33)
    assert cfg.grid == construct_typeA(3, 1).grid


def test_certify_examples():
    assert certify_nonembeddability(L33).d == 1
    rep = certify_nonembeddability(boolean_lattice(4))
    assert rep.failure["error"] == "NotThick" and not rep.ok
    pentagon = lattice_of_flats(range(5), [(0, 1, 2), (2, 3, 4)])
    assert certify_nonembeddability(pentagon).failure is not None


def test_geometric_paths():
    fano = subspace_lattice(2, 3).poset
    cfg = construct_geometric(fano)
    assert cfg.d == 1 and is_weakly_independent(None, cfg)[0]
    ag = affine_plane_flats(3)
    cfg = construct_geometric(ag)
    assert cfg.d == 1 and is_weakly_independent(None, cfg)[0]


def test_merge_product_configs():
    F = subspace_lattice(2, 3).poset
    c = construct_geometric(F)
    merged = merge_product_configs([c, c])
    assert merged.d == 3 and merged.host.n == 256
    assert is_weakly_independent(None, merged)[0]


@pytest.mark.parametrize("host,d,seed", [(L24, 2, 1), (L33, 1, 2), (L24, 1, 3)])
def test_weak_independence_matches_brute_force(host, d, seed):
    rng = random.Random(seed)
    P = host.poset
    vecs = {i: host.element(i).basis[0] for i in P.atoms}
    for _ in range(25):
        grid = random_atom_grid(rng, P.atoms, d)
        cfg = AtomConfiguration(grid, P)
        if not is_extendable(None, cfg)[0]:
            continue
        expected = brute_weak_independent([[vecs[x] for x in row] for row in grid], host.spec.p)
        assert is_weakly_independent(None, cfg)[0] == expected


@settings(suppress_health_check=[HealthCheck.too_slow], max_examples=40)
@given(st.sampled_from([(L24, 2), (L33, 1), (L24, 1)]), st.randoms(use_true_random=False))
def test_verifier_implications(case, rnd):
    host, d = case
    P = host.poset
    cfg = AtomConfiguration(random_atom_grid(rnd, P.atoms, d), P)
    if not is_extendable(None, cfg)[0]:
        return
    ind = is_independent(None, cfg)[0]
    weak = is_weakly_independent(None, cfg)[0]
    crit = indconf_criterion(None, cfg)[0]
    assert not crit or ind
    assert not ind or weak
    joins = _face_joins(cfg, P)
    assert _weak_definitional(cfg, joins)[0] == _weak_criterion(cfg, joins)[0]
    # the same grid on the implicit host gives the same verdicts
    implicit = AtomConfiguration([[host.element(x) for x in row] for row in cfg.grid], host)
    assert is_weakly_independent(None, implicit)[0] == weak

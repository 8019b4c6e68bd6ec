import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from ordercx.errors import DimensionMismatch
from ordercx.simplicial import complex_from_facets, d3_join_power
from ordercx.vk import (
    _crosses,
    disjoint_pairs,
    gf2_solve,
    intersection_cocycle,
    moment_parameters,
    vk_obstruction_mod2,
)

from oracles import segments_cross_exact, segments_cross_on_parabola


def graph(G):
    return complex_from_facets(sorted(G.nodes), [list(e) for e in G.edges])


@pytest.mark.parametrize("G", [nx.complete_bipartite_graph(3, 3), nx.complete_graph(5)])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_kuratowski_graphs_are_obstructed(G, seed):
    assert vk_obstruction_mod2(graph(G), seed=seed)["verdict"] == "nonzero"
    assert vk_obstruction_mod2(graph(G), seed=seed, ordered=True)["verdict"] == "nonzero"


@pytest.mark.parametrize("n", range(3, 9))
def test_cycles_vanish(n):
    rep = vk_obstruction_mod2(graph(nx.cycle_graph(n)))
    assert rep["verdict"] == "zero" and rep["d"] == 1


def test_planar_graphs_vanish():
    for G in (nx.complete_graph(4), nx.wheel_graph(7), nx.grid_2d_graph(3, 3)):
        G = nx.convert_node_labels_to_integers(G)
        assert vk_obstruction_mod2(graph(G), seed=1)["verdict"] == "zero"


def test_d1_crossings_are_interlacings():
    K = graph(nx.complete_graph(6))
    pairs, values, ts = intersection_cocycle(K)
    assert ts == [1, 2, 3, 4, 5, 6]
    for (s, t), v in zip(pairs, values):
        assert v == segments_cross_on_parabola(ts[s[0]], ts[s[1]], ts[t[0]], ts[t[1]])


@pytest.mark.parametrize("seed", [1, 2, 7])
def test_d1_crossings_against_planar_geometry(seed):
    K = graph(nx.complete_graph(6))
    ts = moment_parameters(6, seed)
    pts = [[t, t * t] for t in ts]
    for s, t in disjoint_pairs(K, 2):
        hit, generic = _crosses(pts, s, t)
        assert generic
        assert hit == segments_cross_exact(pts[s[0]], pts[s[1]], pts[t[0]], pts[t[1]])


def test_d3_join_square_pairs():
    K = d3_join_power(2)
    assert len(disjoint_pairs(K, 4)) == 108
    rep = vk_obstruction_mod2(K)
    assert rep["verdict"] == "nonzero" and rep["pairs_2d"] == 108


def test_disjoint_pairs_are_disjoint_and_unique():
    K = graph(nx.petersen_graph())
    pairs = disjoint_pairs(K, 2)
    assert len(set(pairs)) == len(pairs)
    assert all(not set(s) & set(t) for s, t in pairs)
    m = K.f_vector[1]
    adjacent = sum(d * (d - 1) // 2 for _, d in nx.petersen_graph().degree)
    assert len(pairs) == m * (m - 1) // 2 - adjacent


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_gf2_solve_matches_brute_force(nrows, ncols, data):
    A = data.draw(st.lists(st.lists(st.integers(0, 1), min_size=ncols, max_size=ncols),
                           min_size=nrows, max_size=nrows))
    b = data.draw(st.lists(st.integers(0, 1), min_size=nrows, max_size=nrows))
    x = gf2_solve(A, b)
    exists = any(all(sum(a * y for a, y in zip(row, cand)) % 2 == r for row, r in zip(A, b))
                 for cand in itertools.product((0, 1), repeat=ncols))
    assert (x is not None) == exists
    if x is not None:
        assert all(sum(a * y for a, y in zip(row, x)) % 2 == r for row, r in zip(A, b))


def test_gf2_solve_shape_errors():
    with pytest.raises(DimensionMismatch):
        gf2_solve([[1, 0]], [1, 0])
    with pytest.raises(DimensionMismatch):
        gf2_solve([[1, 0], [1]], [1, 0])

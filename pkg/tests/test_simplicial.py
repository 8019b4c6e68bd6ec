import itertools

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from ordercx.errors import NotExtendable
from ordercx.poset import boolean_lattice, chain
from ordercx.simplicial import (
    SimplicialComplex,
    barycentric_subdivision,
    complex_from_facets,
    d3_join_power,
    face_poset,
    find_kuratowski_subdivision,
    graph_stats,
    induced_simplicial_map,
    join_complexes,
    order_complex,
    reduced_order_complex,
)
from ordercx.spaces import subspace_lattice


def graph_complex(G):
    return complex_from_facets(sorted(G.nodes), [list(e) for e in G.edges])


def to_nx(K):
    G = nx.Graph()
    G.add_nodes_from(range(K.n_vertices))
    G.add_edges_from(K.edges)
    return G


def test_facets_are_maximal_and_sorted():
    K = SimplicialComplex(list("abcd"), [(2, 1, 0), (0, 1), (3,)])
    assert K.facets == [(3,), (0, 1, 2)]
    assert K.f_vector == [4, 3, 1]
    assert K.euler_characteristic() == 2
    assert K.is_face((1, 0)) and not K.is_face((0, 3))


def test_d3_join_powers():
    K = d3_join_power(1)
    assert K.n_vertices == 6 and len(K.facets) == 9
    assert nx.is_isomorphic(to_nx(K), nx.complete_bipartite_graph(3, 3))
    K3 = d3_join_power(2)
    assert K3.f_vector == [9, 27, 27]
    assert K3.labels[0] == (1, 1) and K3.labels[8] == (3, 3)


def test_join_complexes_matches_power():
    pts = SimplicialComplex([1, 2, 3], [(0,), (1,), (2,)])
    J = join_complexes(pts, pts)
    assert J.f_vector == d3_join_power(1).f_vector


def test_barycentric_subdivision_of_simplex():
    tri = SimplicialComplex(list("abc"), [(0, 1, 2)])
    sd = barycentric_subdivision(tri)
    assert sd.f_vector == [7, 12, 6]
    assert sd.euler_characteristic() == tri.euler_characteristic()
    assert face_poset(tri).n == 7


@given(st.lists(st.lists(st.integers(0, 6), min_size=1, max_size=4, unique=True), min_size=1, max_size=5))
def test_subdivision_preserves_euler_characteristic(facets):
    K = complex_from_facets(None, facets)
    assert barycentric_subdivision(K).euler_characteristic() == K.euler_characteristic()
    # every subset of a facet is a face
    for f in K.facets:
        for r in range(1, len(f) + 1):
            for sub in itertools.combinations(f, r):
                assert K.is_face(sub)


def test_order_complex_of_boolean_lattice():
    K = reduced_order_complex(boolean_lattice(3))
    # the barycentric subdivision of a triangle boundary: a hexagon
    assert K.f_vector == [6, 6]
    assert order_complex(chain(4)).facets == [(0, 1, 2, 3)]


def test_fano_order_complex_is_the_heawood_graph():
    K = reduced_order_complex(subspace_lattice(2, 3).poset)
    assert nx.is_isomorphic(to_nx(K), nx.heawood_graph())
    stats = graph_stats(K)
    assert stats["vertices"] == 14 and stats["edges"] == 21
    assert stats["girth"] == 6 and stats["diameter"] == 3 and stats["bipartite"]
    assert stats["euler_nonplanar_flag"]


@pytest.mark.parametrize("G,expected", [
    (nx.complete_bipartite_graph(3, 3), "K33"),
    (nx.complete_graph(5), "K5"),
    (nx.petersen_graph(), "K33"),
    (nx.cycle_graph(7), None),
    (nx.complete_graph(4), None),
    (nx.wheel_graph(8), None),
])
def test_kuratowski_search(G, expected):
    K = graph_complex(G)
    found = find_kuratowski_subdivision(K)
    assert found == expected
    assert (found is None) == nx.check_planarity(G)[0]


def test_kuratowski_search_on_subdivided_k33():
    G = nx.complete_bipartite_graph(3, 3)
    H = nx.Graph()
    for k, (a, b) in enumerate(G.edges):
        mid = 100 + k
        H.add_edges_from([(a, mid), (mid, b)])
    assert find_kuratowski_subdivision(graph_complex(H)) == "K33"


@given(st.integers(3, 8), st.integers(0, 6), st.randoms(use_true_random=False))
def test_graph_stats_against_networkx(n, extra, rnd):
    G = nx.cycle_graph(n)
    for _ in range(extra):
        a, b = rnd.sample(range(n), 2)
        G.add_edge(a, b)
    s = graph_stats(graph_complex(G))
    assert s["vertices"] == n and s["edges"] == G.number_of_edges()
    assert s["girth"] == nx.girth(G)
    assert s["diameter"] == nx.diameter(G)
    assert s["bipartite"] == nx.is_bipartite(G)
    assert (s["subdivision"] is None) == nx.check_planarity(G)[0]


def test_induced_map_for_typeA_configuration():
    L = subspace_lattice(3, 2)
    K = d3_join_power(0)
    atoms = L.subspaces[1:4]
    g = {(1, j): atoms[j - 1] for j in (1, 2, 3)}
    phi = induced_simplicial_map(g, K, L)
    assert phi.verify() and len(set(phi.vertex_map)) == 3


def test_induced_map_rejects_top():
    L = subspace_lattice(2, 2)
    K = d3_join_power(1)
    atoms = L.poset.atoms
    g = {(i, j): atoms[j - 1] for i in (1, 2) for j in (1, 2, 3)}
    with pytest.raises(NotExtendable):
        induced_simplicial_map(g, K, L.poset)

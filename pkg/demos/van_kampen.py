"""
The mod-2 van Kampen obstruction
================================

Place the vertices on the moment curve, count crossings of disjoint
d-simplices in R^{2d}, and ask whether the resulting cocycle is a
coboundary over GF(2).
"""

import networkx as nx

from ordercx.simplicial import complex_from_facets, d3_join_power
from ordercx.vk import intersection_cocycle, vk_obstruction_mod2


def graph(G):
    return complex_from_facets(sorted(G.nodes), [list(e) for e in G.edges])


# on the parabola, two chords cross exactly when their endpoints interlace
K33 = d3_join_power(1)
pairs, values, ts = intersection_cocycle(K33)
print(ts)
print(sum(values), "crossings among", len(pairs), "disjoint edge pairs")

for name, K in [("K_{3,3}", K33), ("K_5", graph(nx.complete_graph(5))),
                ("C_6", graph(nx.cycle_graph(6))), ("Petersen", graph(nx.petersen_graph()))]:
    print(name, vk_obstruction_mod2(K)["verdict"])

# the van Kampen-Flores complex D_3^{*3} does not embed in R^4
rep = vk_obstruction_mod2(d3_join_power(2), seed=1)
print({k: rep[k] for k in ("d", "pairs_2d", "pairs_2d_minus_1", "verdict")})

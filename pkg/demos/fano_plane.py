"""
The Fano plane and K_{3,3}
==========================

The proper part of the subspace lattice of F_2^3 is the incidence graph of
the Fano plane.  A 2 x 3 grid of points gives a weakly independent atom
configuration, so that graph contains a copy of K_{3,3} and is not planar.
"""

from ordercx import poset, simplicial
from ordercx.config import construct_fano_example, is_independent, is_weakly_independent, verify_configuration
from ordercx.spaces import subspace_lattice

L = subspace_lattice(2, 3)
P = L.poset
print(P.n, "subspaces of F_2^3")

# 0 < points < lines < F_2^3: a geometric, modular, thick lattice of rank 3
print(poset.analyze_lattice(P).to_json())

# remove bottom and top; what is left is a graph (dimension 1)
K = simplicial.reduced_order_complex(P)
print(simplicial.graph_stats(K))

# rows {e1, e2, e1+e2} and {e1+e3, e2+e3, e1+e2+e3}
cfg = construct_fano_example()
for row in cfg.grid:
    print([U.basis[0] for U in row])

# two faces collide, so the configuration is not independent ...
print(is_independent(None, cfg))
# ... but two disjoint faces never do
print(is_weakly_independent(None, cfg))

report = verify_configuration(cfg)
print(report.summary())

"""
Totally isotropic subspaces
===========================

Symplectic and Hermitian polar spaces carry explicit independent atom
configurations built from hyperbolic pairs e_i, f_i.
"""

import time

from ordercx.config import construct_hermitian, construct_symplectic, verify_configuration
from ordercx.gf import find_antiself_conjugate
from ordercx.spaces import alternating_form, hermitian_form, isotropic_poset

# W(3, 2): totally isotropic subspaces of F_2^4 under <x, y> = x1 y3 - x3 y1 + x2 y4 - x4 y2
form = alternating_form(2, 1)
print(form.layout)
print(form.gram)

W = isotropic_poset(form)
print(W, W.poset.n, "elements,", len(W.poset.atoms), "points, thick:", W.is_thick)

cfg = construct_symplectic(2, 1, W)
for row in cfg.grid:
    print([U.basis[0] for U in row])
print(verify_configuration(cfg).summary())

# Hermitian forms need lambda with conj(lambda) = -lambda
for q, m in [(2, 4), (2, 5), (3, 4)]:
    t0 = time.perf_counter()
    H = isotropic_poset(hermitian_form(q, m))
    lam = find_antiself_conjugate(H.spec)
    rep = verify_configuration(construct_hermitian(q, m, H))
    print(f"H({m - 1}, {q}^2): {H.poset.n} subspaces, lambda={lam!r}, "
          f"independent={rep.independent}, {time.perf_counter() - t0:.2f}s")

"""Order complexes of finite posets and certificates of their non-embeddability.

The main entry points:

* ``gf`` / ``linalg``: exact arithmetic in F_q and subspaces of F_q^m.
* ``poset``: finite posets, lattice analysis, products and factorization.
* ``spaces``: subspace lattices and polar-space posets.
* ``simplicial``: complexes, order complexes, D_3^{*(d+1)}, graph diagnostics.
* ``config``: atom configurations, their verifiers and constructors.
* ``vk``: mod-2 van Kampen obstruction as an independent check.
"""

from .config import (
    AtomConfiguration,
    CertificateReport,
    certify_nonembeddability,
    construct_fano_example,
    construct_geometric,
    construct_hermitian,
    construct_symplectic,
    construct_typeA,
    construct_typeA_q2,
    is_extendable,
    is_independent,
    is_weakly_independent,
    merge_product_configs,
    verify_configuration,
)
from .gf import FieldElem, FieldSpec, field_make
from .linalg import SubspaceFq, enumerate_subspaces, rref
from .poset import Poset, analyze_lattice, product
from .simplicial import SimplicialComplex, d3_join_power, order_complex
from .spaces import IsotropicPoset, isotropic_poset, subspace_lattice
from .vk import vk_obstruction_mod2

__version__ = "0.1.0"

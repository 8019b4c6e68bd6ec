"""Atom configurations and the certificate engine.

A configuration is a (d+1) x 3 grid of atoms x[i][j] of a host poset.  A face
of D_3^{*(d+1)} is encoded as a vector ``f`` in {0,1,2,3}^{d+1}: ``f[i] = j``
selects x[i][j-1], ``f[i] = 0`` leaves row i out.  The face maps to the join
of its selected atoms.

Hosts are duck typed: an explicit :class:`~ordercx.poset.Poset` (elements are
indices) or a :class:`~ordercx.spaces.IsotropicPoset` (elements are
subspaces).  Both offer ``bottom``, ``top``, ``join``, ``le``, ``is_atom``,
``label`` and ``digest``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import budget
from .errors import (
    BooleanFactorPresent,
    BudgetExceeded,
    InternalCriterionMismatch,
    InvalidConfiguration,
    NotExtendable,
    NotGeometric,
    NotThick,
    NoUpperBound,
    NonUniqueJoin,
    PosetError,
    QTooSmall,
    VerificationFailed,
)
from .gf import find_antiself_conjugate
from .linalg import SubspaceFq, subspace_from_json, unit
from .poset import (
    Poset,
    analyze_lattice,
    decompose_modular_geometric,
    interval,
    is_modular_via_lines,
    jsonable,
    product,
)
from .simplicial import d3_join_power, graph_stats, reduced_order_complex
from .spaces import (
    ALTERNATING,
    IsotropicPoset,
    alternating_form,
    hermitian_form,
    isotropic_poset,
    space_from_descriptor,
    subspace_lattice,
)

# -- host helpers ---------------------------------------------------------------


def host_digest(host) -> str:
    return host.digest()


def element_to_json(x):
    if isinstance(x, SubspaceFq):
        return x.to_json()
    return int(x)


def element_from_json(host, obj):
    if isinstance(obj, dict):
        if not isinstance(host, IsotropicPoset):
            raise InvalidConfiguration("subspace entries need a subspace host")
        U = subspace_from_json(obj, host.spec)
        if U.m != host.m:
            raise InvalidConfiguration(f"subspace lives in dimension {U.m}, host in {host.m}")
        return U
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise InvalidConfiguration(f"grid entry {obj!r} is neither an index nor a subspace")
    P = host if isinstance(host, Poset) else host.poset
    if not 0 <= obj < P.n:
        raise InvalidConfiguration(f"grid entry {obj} is not an element of the poset")
    return obj


def host_to_json(host) -> dict:
    """Self-contained host description (inline order or space descriptor)."""
    if isinstance(host, Poset):
        return {"kind": "poset", "poset": host.to_json()}
    return {"kind": "space", "space": host.descriptor()}


def host_from_json(obj: dict):
    if obj["kind"] == "poset":
        return Poset.from_json(obj["poset"])
    if obj["kind"] == "space":
        return space_from_descriptor(obj["space"])
    raise InvalidConfiguration(f"unknown host kind {obj['kind']!r}")


# -- configurations ----------------------------------------------------------------


class AtomConfiguration:
    """The grid {x_{i,j}}; rows are 0-based here, 1-based in witnesses."""

    def __init__(self, grid, host, check: bool = True):
        self.grid = tuple(tuple(row) for row in grid)
        self.host = host
        self.d = len(self.grid) - 1
        if check:
            self.validate()
        self._cache = {}

    def validate(self):
        if not self.grid:
            raise InvalidConfiguration("empty grid")
        budget.check("config_d", self.d, "configuration dimension")
        for i, row in enumerate(self.grid):
            if len(row) != 3:
                raise InvalidConfiguration(f"row {i + 1} has {len(row)} entries, expected 3")
            if len(set(row)) != 3:
                raise InvalidConfiguration(f"row {i + 1} repeats an atom")
            for x in row:
                if not self.host.is_atom(x):
                    raise InvalidConfiguration(f"{self.host.label(x)!r} is not an atom")

    def __repr__(self):
        return f"AtomConfiguration(d={self.d}, host={self.host!r})"

    def atom(self, i: int, j: int):
        """x_{i,j} with 1-based indices."""
        return self.grid[i - 1][j - 1]

    def rows_json(self) -> list:
        return [[element_to_json(x) for x in row] for row in self.grid]

    def to_json(self) -> dict:
        return {"d": self.d, "grid": self.rows_json(), "poset": host_digest(self.host)}

    @classmethod
    def from_json(cls, obj: dict, host) -> "AtomConfiguration":
        ref = obj.get("poset")
        if isinstance(ref, str) and ref != host_digest(host):
            raise InvalidConfiguration("configuration refers to a different poset")
        grid = [[element_from_json(host, x) for x in row] for row in obj["grid"]]
        cfg = cls(grid, host)
        if "d" in obj and obj["d"] != cfg.d:
            raise InvalidConfiguration(f"declared d={obj['d']} but grid has {cfg.d + 1} rows")
        return cfg


def config_from_json(obj: dict, host) -> AtomConfiguration:
    """Load a grid; index entries on a subspace host refer to its materialized order."""
    if isinstance(host, IsotropicPoset) and any(
            not isinstance(x, dict) for row in obj["grid"] for x in row):
        host = host.poset
    return AtomConfiguration.from_json(obj, host)


def _faces(d: int):
    """Nonempty face vectors of D_3^{*(d+1)} in lexicographic order."""
    return [f for f in itertools.product(range(4), repeat=d + 1) if any(f)]


def _face_atoms(cfg, f):
    return [cfg.grid[i][j - 1] for i, j in enumerate(f) if j]


def _face_json(f) -> dict:
    rows = [i + 1 for i, j in enumerate(f) if j]
    return {"I": rows, "j": [j for j in f if j]}


def _face_joins(cfg, host):
    """face vector -> join (or the exception raised computing it)."""
    key = ("joins", id(host))
    if key in cfg._cache:
        return cfg._cache[key]
    out = {}
    for f in _faces(cfg.d):
        last = max(i for i, j in enumerate(f) if j)
        parent = f[:last] + (0,) * (cfg.d + 1 - last)
        x = cfg.grid[last][f[last] - 1]
        try:
            if any(parent) and not isinstance(out[parent], Exception):
                out[f] = host.join([out[parent], x])
            else:
                out[f] = host.join(_face_atoms(cfg, f))
        except (NoUpperBound, NonUniqueJoin) as exc:
            out[f] = exc
    cfg._cache[key] = out
    return out


def _host(P, cfg):
    return cfg.host if P is None else P


def is_extendable(P, cfg: AtomConfiguration):
    """All face joins exist and avoid bottom and top.

    Maximal faces are scanned first (the condition as usually stated), then
    every smaller face.  The witness is the first failing face.
    """
    host = _host(P, cfg)
    joins = _face_joins(cfg, host)
    maximal = [f for f in joins if all(f)]
    rest = [f for f in joins if not all(f)]
    for f in maximal + rest:
        value = joins[f]
        reason = None
        if isinstance(value, Exception):
            reason = f"join does not exist ({type(value).__name__})"
        elif host.bottom is not None and value == host.bottom:
            reason = "join is the bottom element"
        elif host.top is not None and value == host.top:
            reason = "join is the top element"
        if reason:
            return False, {**_face_json(f), "reason": reason}
    return True, None


def _require_extendable(host, cfg):
    ok, w = is_extendable(host, cfg)
    if not ok:
        raise NotExtendable(f"configuration is not extendable: {w}", face=w)


def indconf_criterion(P, cfg: AtomConfiguration):
    """x_{i,j} is not below the join of any maximal face choosing j_i != j."""
    host = _host(P, cfg)
    _require_extendable(host, cfg)
    joins = _face_joins(cfg, host)
    for js in itertools.product((1, 2, 3), repeat=cfg.d + 1):
        top = joins[js]
        for i in range(cfg.d + 1):
            for j in (1, 2, 3):
                if j != js[i] and host.le(cfg.grid[i][j - 1], top):
                    return False, {"choice": list(js), "i": i + 1, "j": j}
    return True, None


def _first_pair(groups):
    best = None
    for g in groups:
        if len(g) > 1 and (best is None or (g[0], g[1]) < best):
            best = (g[0], g[1])
    return best


def is_independent(P, cfg: AtomConfiguration):
    """Distinct faces have distinct joins; witness is the first colliding pair."""
    host = _host(P, cfg)
    _require_extendable(host, cfg)
    joins = _face_joins(cfg, host)
    groups = {}
    for f, value in joins.items():
        groups.setdefault(value, []).append(f)
    pair = _first_pair(groups.values())
    if pair is None:
        return True, None
    a, b = pair
    return False, {"alpha": _face_json(a), "beta": _face_json(b),
                   "join": jsonable(element_to_json(joins[a]))}


def _weak_definitional(cfg, joins):
    """Disjoint faces of the complex D_3^{*(d+1)} must have distinct joins."""
    K = d3_join_power(cfg.d)
    vec = {}
    for face in K.faces:
        f = [0] * (cfg.d + 1)
        for v in face:
            i, j = K.labels[v]
            f[i - 1] = j
        vec[face] = tuple(f)
    groups = {}
    for face in K.faces:
        groups.setdefault(joins[vec[face]], []).append(frozenset(face))
    hits = []
    for g in groups.values():
        for a, b in itertools.combinations(g, 2):
            if not a & b:
                hits.append(tuple(sorted((vec[tuple(sorted(a))], vec[tuple(sorted(b))]))))
    return (not hits), (min(hits) if hits else None)


def _weak_criterion(cfg, joins):
    """Index-vector form: pairs (I, j), (I', j') with j_i != j'_i on I & I'."""
    groups = {}
    for f, value in joins.items():
        groups.setdefault(value, []).append(f)
    best = None
    for g in groups.values():
        if len(g) < 2:
            continue
        G = np.array(g)
        a, b = G[:, None, :], G[None, :, :]
        compatible = ((a == 0) | (b == 0) | (a != b)).all(axis=2)
        iu = np.argwhere(np.triu(compatible, k=1))
        if iu.size:
            s, t = iu[0]
            cand = tuple(sorted((g[s], g[t])))
            if best is None or cand < best:
                best = cand
    return best is None, best


def is_weakly_independent(P, cfg: AtomConfiguration):
    """Both evaluations are run; a disagreement is an internal error."""
    host = _host(P, cfg)
    _require_extendable(host, cfg)
    joins = _face_joins(cfg, host)
    ok_a, w_a = _weak_definitional(cfg, joins)
    ok_b, w_b = _weak_criterion(cfg, joins)
    if ok_a != ok_b:
        raise InternalCriterionMismatch(
            f"definitional verdict {ok_a} but criterion verdict {ok_b}")
    if ok_b:
        return True, None
    a, b = w_b
    return False, {"I": _face_json(a)["I"], "j": _face_json(a)["j"],
                   "I_prime": _face_json(b)["I"], "j_prime": _face_json(b)["j"],
                   "join": jsonable(element_to_json(joins[a]))}


# -- certificates ------------------------------------------------------------------


def conclusion_text(d: int) -> str:
    return f"Δ(P̄) does not embed in R^{2 * d}"


@dataclass
class CertificateReport:
    d: int | None
    host_digest: str | None
    extendable: bool = False
    independent: bool = False
    weakly_independent: bool = False
    indconf_criterion: bool = False
    criterion_agreement: bool = True
    conclusion: str | None = None
    witnesses: dict = field(default_factory=dict)
    config: dict | None = None
    host: dict | None = None
    failure: dict | None = None
    graph_refutation: dict | None = None

    @property
    def ok(self) -> bool:
        return self.weakly_independent

    def summary(self) -> str:
        if self.conclusion:
            kind = "independent" if self.independent else "weakly independent"
            return f"{self.conclusion} (d={self.d}, {kind} atom configuration)"
        if self.failure:
            return f"no certificate: {self.failure['error']}: {self.failure['message']}"
        return "no certificate: configuration is not weakly independent"

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "host_digest": self.host_digest,
            "extendable": self.extendable,
            "independent": self.independent,
            "weakly_independent": self.weakly_independent,
            "indconf_criterion": self.indconf_criterion,
            "criterion_agreement": self.criterion_agreement,
            "conclusion": self.conclusion,
            "witnesses": self.witnesses,
            "config": self.config,
            "host": self.host,
            "failure": self.failure,
            "graph_refutation": self.graph_refutation,
        }


def verify_configuration(cfg: AtomConfiguration, P=None) -> CertificateReport:
    """Run every verifier on ``cfg`` and assemble the report."""
    host = _host(P, cfg)
    rep = CertificateReport(d=cfg.d, host_digest=host_digest(host),
                            config=cfg.to_json(), host=host_to_json(host))
    ok, w = is_extendable(host, cfg)
    rep.extendable = ok
    if not ok:
        rep.witnesses["extendable"] = w
        return rep
    ind, w = is_independent(host, cfg)
    rep.independent = ind
    if w:
        rep.witnesses["independent"] = w
    crit, w = indconf_criterion(host, cfg)
    rep.indconf_criterion = crit
    if w:
        rep.witnesses["indconf_criterion"] = w
    try:
        weak, w = is_weakly_independent(host, cfg)
    except InternalCriterionMismatch as exc:
        rep.criterion_agreement = False
        rep.witnesses["criterion_agreement"] = str(exc)
        return rep
    rep.weakly_independent = weak
    if w:
        rep.witnesses["weakly_independent"] = w
    if crit and not ind:
        raise InternalCriterionMismatch("sufficient criterion holds but faces collide")
    if ind and not weak:
        raise InternalCriterionMismatch("independent configuration is not weakly independent")
    if weak:
        rep.conclusion = conclusion_text(cfg.d)
    return rep


def verify_certificate(obj: dict) -> CertificateReport:
    """Re-run the verifiers using nothing but a certificate's JSON."""
    if obj.get("config") is None or obj.get("host") is None:
        raise InvalidConfiguration("certificate carries no configuration to verify")
    host = host_from_json(obj["host"])
    cfg = config_from_json(obj["config"], host)
    return verify_configuration(cfg)


# -- explicit constructors -----------------------------------------------------------


def _span(host, v) -> SubspaceFq:
    return host.span([v])


def _grid_from_vectors(host, rows):
    return AtomConfiguration([[_span(host, v) for v in row] for row in rows], host)


def construct_typeA(q: int, d: int, host: IsotropicPoset | None = None) -> AtomConfiguration:
    """x_{i,j} = <e_i + lambda_j e_{d+2}> in L(F_q^{d+2}), q >= 3."""
    if q < 3:
        raise QTooSmall("this construction needs three distinct field elements (q >= 3)")
    if d < 1:
        raise ValueError("d must be >= 1")
    host = host or subspace_lattice(q, d + 2)
    m = host.m
    lam = [0, 1, 2]  # codes of the first three field elements
    rows = []
    for i in range(d + 1):
        row = []
        for c in lam:
            v = unit(m, i)
            v[m - 1] = c
            row.append(v)
        rows.append(row)
    return _grid_from_vectors(host, rows)


def construct_typeA_q2(d: int, host: IsotropicPoset | None = None) -> AtomConfiguration:
    """x_{i,j} = <u_i + w_j> over F_2 with u_{d+1} = e_1 + e_2."""
    if d < 2:
        raise ValueError("this construction needs d >= 2; use construct_fano_example for d = 1")
    host = host or subspace_lattice(2, d + 2)
    m = d + 2
    e = [unit(m, k) for k in range(m)]
    u = e[:d] + [e[0] ^ e[1]]
    w = [e[d], e[d + 1], e[d] ^ e[d + 1]]
    return _grid_from_vectors(host, [[ui ^ wj for wj in w] for ui in u])


def construct_fano_example(host: IsotropicPoset | None = None) -> AtomConfiguration:
    """The K_{3,3} vertex map into the Fano plane, rows {1,2,3} and {4,5,6}."""
    host = host or subspace_lattice(2, 3)
    rows = [[(1, 0, 0), (0, 1, 0), (1, 1, 0)],
            [(1, 0, 1), (0, 1, 1), (1, 1, 1)]]
    return _grid_from_vectors(host, [[np.array(v) for v in row] for row in rows])


def construct_symplectic(q: int, d: int, host: IsotropicPoset | None = None) -> AtomConfiguration:
    """x_{i,1} = e_i, x_{i,2} = e_i + f_i, x_{i,3} = f_i."""
    if d < 1:
        raise ValueError("d must be >= 1")
    host = host or isotropic_poset(alternating_form(q, d))
    form = host.form
    m = form.m
    rows = []
    for i in range(1, d + 2):
        e, f = unit(m, form.e(i)), unit(m, form.f(i))
        rows.append([e, host.spec.vadd(e, f), f])
    return _grid_from_vectors(host, rows)


def construct_hermitian(q: int, m: int, host: IsotropicPoset | None = None) -> AtomConfiguration:
    """x_{i,1} = e_i, x_{i,2} = e_i + lambda f_i, x_{i,3} = f_i with conj(lambda) = -lambda."""
    if m < 4:
        raise ValueError("m must be at least 4 (d >= 1)")
    host = host or isotropic_poset(hermitian_form(q, m))
    form = host.form
    spec = host.spec
    lam = find_antiself_conjugate(spec).value
    d = form.d
    rows = []
    for i in range(1, d + 2):
        e, f = unit(m, form.e(i)), unit(m, form.f(i))
        rows.append([e, spec.vadd(e, spec.vmul(f, lam)), f])
    return _grid_from_vectors(host, rows)


# -- products and geometric lattices -----------------------------------------------------


def _explicit(cfg):
    """(Poset, grid of indices) for a configuration on any host."""
    host = cfg.host
    if isinstance(host, Poset):
        return host, cfg.grid
    return host.poset, tuple(tuple(host.index_of(x) for x in row) for row in cfg.grid)


def merge_product_configs(cfgs, target: Poset | None = None) -> AtomConfiguration:
    """Union of per-factor configurations inside the product of their hosts.

    Row entries a of factor k become (0, .., a, .., 0).  The result is
    verified weakly independent.
    """
    cfgs = list(cfgs)
    if not cfgs:
        raise InvalidConfiguration("nothing to merge")
    parts = [_explicit(c) for c in cfgs]
    for c, (F, _) in zip(cfgs, parts):
        ok, w = is_weakly_independent(F, AtomConfiguration(_explicit(c)[1], F))
        if not ok:
            raise VerificationFailed(f"factor configuration is not weakly independent: {w}")
    factors = [F for F, _ in parts]
    if len(factors) == 1:
        Q = target or factors[0]
        return AtomConfiguration(parts[0][1], Q)
    Q = target or product(*factors)
    shape = [F.n for F in factors]
    if Q.n != int(np.prod(shape)):
        raise InvalidConfiguration("target is not the product of the factor hosts")
    strides = [int(np.prod(shape[k + 1:])) for k in range(len(shape))]
    base = sum(F.bottom * s for F, s in zip(factors, strides))
    rows = []
    for k, (F, grid) in enumerate(parts):
        for row in grid:
            rows.append([base + (a - F.bottom) * strides[k] for a in row])
    merged = AtomConfiguration(rows, Q)
    ok, w = is_weakly_independent(Q, merged)
    if not ok:
        raise VerificationFailed(f"merged configuration is not weakly independent: {w}")
    return merged


def _atoms_on(P: Poset, x) -> list:
    return [a for a in P.atoms if P.order[a, x]]


def _projective_rows(F: Poset) -> list:
    """rank(F) - 1 rows of atoms for an irreducible modular geometric lattice."""
    r = F.rank
    atoms = F.atoms
    if r < 2:
        raise BooleanFactorPresent("rank-one factor is a Boolean part")
    if r == 2:
        return [atoms[:3]]
    lines = F.elements_of_rank(2)
    per_line = len(_atoms_on(F, lines[0]))
    rk = F.rank_function

    def span_rank(xs):
        return int(rk[F.join(xs)])

    if per_line >= 4:
        p = atoms[0]
        basis = []
        for a in atoms[1:]:
            if span_rank([p, *basis, a]) == len(basis) + 2:
                basis.append(a)
            if len(basis) == r - 1:
                break
        rows = []
        for e in basis:
            line = F.join([e, p])
            rows.append([a for a in _atoms_on(F, line) if a != p][:3])
        return rows

    def third(a, b):
        return next(c for c in _atoms_on(F, F.join([a, b])) if c not in (a, b))

    if r == 3:
        first = F.join(atoms[:2])
        row1 = _atoms_on(F, first)
        row2 = [a for a in atoms if a not in row1][:3]
        return [row1, row2]
    basis = [atoms[0]]
    for a in atoms[1:]:
        if span_rank([*basis, a]) == len(basis) + 1:
            basis.append(a)
        if len(basis) == r:
            break
    d = r - 2
    u = basis[:d] + [third(basis[0], basis[1])]
    w = [basis[d], basis[d + 1], third(basis[d], basis[d + 1])]
    return [[third(ui, wj) for wj in w] for ui in u]


def _geometric_rows(P: Poset, report=None) -> list:
    """Row list (indices of P) of a weakly independent configuration."""
    report = report or analyze_lattice(P)
    if not report.is_geometric:
        raise NotGeometric(f"not a geometric lattice: {report.witnesses.get('geometric')}")
    if report.rank < 2:
        raise NotGeometric("rank must be at least 2")
    if report.is_modular_rank:
        dec = decompose_modular_geometric(P, report)
        if dec.boolean_atoms:
            if not report.is_thick:
                raise NotThick("lattice has a Boolean factor and is not thick",
                               witness=report.witnesses.get("thick"))
            raise BooleanFactorPresent("thick lattice with a Boolean factor")
        cfgs = []
        for F in dec.factors:
            rows = _projective_rows(F)
            cfgs.append(AtomConfiguration(rows, F))
        merged = merge_product_configs(cfgs, target=dec.product)
        inv = np.empty(P.n, dtype=np.int64)
        inv[dec.phi] = np.arange(P.n)
        return [[int(inv[x]) for x in row] for row in merged.grid]
    if not report.is_thick:
        raise NotThick("lattice is not thick", witness=report.witnesses.get("thick"))
    ok, (h, line) = is_modular_via_lines(P)
    sub = interval(P, P.bottom, h)
    rows = [[sub.parent_indices[x] for x in row] for row in _geometric_rows(sub)]
    rows.append(_atoms_on(P, line)[:3])
    return rows


def construct_geometric(P: Poset) -> AtomConfiguration:
    """Configuration for a finite geometric lattice, built recursively.

    Modular lattices split into projective factors whose rows are merged;
    otherwise a disjoint hyperplane h and line l give rows from [0, h] plus
    three atoms of l.  The result is verified before it is returned.
    """
    report = analyze_lattice(P)
    rows = _geometric_rows(P, report)
    cfg = AtomConfiguration(rows, P)
    ok, w = is_weakly_independent(P, cfg)
    if not ok:
        raise VerificationFailed(f"constructed configuration is not weakly independent: {w}")
    return cfg


def _failure(exc) -> dict:
    out = {"error": type(exc).__name__, "message": str(exc)}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        out["witness"] = jsonable(witness)
    return out


def _graph_fallback(P: Poset):
    try:
        K = reduced_order_complex(P)
    except BudgetExceeded:
        return None
    if K.dim > 1:
        return None
    return graph_stats(K)


def certify_nonembeddability(host) -> CertificateReport:
    """Construct a configuration for ``host`` and verify it.

    Polar spaces use their form constructor; everything else goes through
    the geometric-lattice path on the explicit order.  Failures come back as
    a structured ``failure`` entry rather than an exception (budget errors
    still propagate).
    """
    if isinstance(host, IsotropicPoset) and host.form is not None:
        form = host.form
        if form.d < 1:
            return CertificateReport(None, host.digest(), host=host_to_json(host),
                                     failure={"error": "NotGeometric",
                                              "message": "form of Witt index 1 has no configuration"})
        if form.kind == ALTERNATING:
            cfg = construct_symplectic(host.spec.q, form.d, host)
        else:
            cfg = construct_hermitian(host.spec.subfield_order, form.m, host)
        return verify_configuration(cfg)
    P = host.poset if isinstance(host, IsotropicPoset) else host
    try:
        cfg = construct_geometric(P)
    except (NotGeometric, NotThick, BooleanFactorPresent, VerificationFailed,
            InvalidConfiguration, PosetError) as exc:
        rep = CertificateReport(None, P.digest(), host=host_to_json(P), failure=_failure(exc))
        rep.graph_refutation = _graph_fallback(P)
        return rep
    return verify_configuration(cfg)

"""``oc``: build posets and complexes, construct and verify certificates.

Exit codes: 0 ok, 2 usage or bad input, 3 budget exceeded, 4 verification
failure (including "no certificate").
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import artifacts
from .config import (
    AtomConfiguration,
    certify_nonembeddability,
    config_from_json,
    construct_fano_example,
    construct_hermitian,
    construct_symplectic,
    construct_typeA,
    construct_typeA_q2,
    host_to_json,
    verify_configuration,
)
from .errors import (
    ArtifactError,
    BudgetExceeded,
    InternalCriterionMismatch,
    OrderCxError,
    VerificationFailed,
)
from .poset import analyze_lattice, boolean_lattice, product
from .simplicial import (
    complex_from_facets,
    d3_join_power,
    graph_stats,
    reduced_order_complex,
)
from .spaces import affine_plane_flats, alternating_form, hermitian_form, isotropic_poset, subspace_lattice
from .vk import vk_obstruction_mod2

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _emit(args, kind, payload):
    env = artifacts.write_artifact(args.output, kind, payload)
    if args.output not in (None, "-"):
        print(f"{kind} {env['digest']} -> {args.output}")
    return env


def cmd_build(args) -> int:
    what = args.what
    if what == "subspace":
        host = subspace_lattice(args.q, args.m)
        payload = artifacts.poset_payload(host)
    elif what == "polar":
        if args.kind == "alternating":
            if args.d is None:
                raise UsageError("alternating polar spaces need --d")
            form = alternating_form(args.q, args.d)
        else:
            if args.m is None:
                raise UsageError("hermitian polar spaces need --m")
            form = hermitian_form(args.q, args.m)
        payload = artifacts.poset_payload(isotropic_poset(form))
    elif what == "boolean":
        payload = artifacts.poset_payload(boolean_lattice(args.n))
    elif what == "affine":
        payload = artifacts.poset_payload(affine_plane_flats(args.q))
    elif what == "product":
        parts = [artifacts.as_explicit(artifacts.load_host(p)) for p in args.posets]
        if len(parts) < 2:
            raise UsageError("product needs at least two poset files")
        payload = artifacts.poset_payload(product(*parts))
    elif what == "d3power":
        _emit(args, "complex", d3_join_power(args.d).to_json())
        return EXIT_OK
    elif what == "complex":
        if args.order_complex:
            K = reduced_order_complex(artifacts.as_explicit(artifacts.load_host(args.order_complex)))
        elif args.facets:
            text = args.facets
            if Path(text).is_file():
                text = Path(text).read_text(encoding="utf-8")
            try:
                facets = json.loads(text)
            except json.JSONDecodeError as exc:
                raise UsageError(f"--facets is not JSON: {exc}") from None
            K = complex_from_facets(None, facets)
        else:
            raise UsageError("build complex needs --facets or --order-complex")
        _emit(args, "complex", K.to_json())
        return EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(what)
    _emit(args, "poset", payload)
    return EXIT_OK


def cmd_check(args) -> int:
    P = artifacts.as_explicit(artifacts.load_host(args.file))
    report = analyze_lattice(P).to_json()
    report["elements"] = P.n
    print(json.dumps(report, sort_keys=True, indent=1))
    return EXIT_OK


def _config_payload(cfg: AtomConfiguration) -> dict:
    return {**cfg.to_json(), "host": host_to_json(cfg.host)}


def cmd_config(args) -> int:
    c = args.construction
    if c == "typeA":
        cfg = construct_typeA(args.q, args.d)
    elif c == "typeA2":
        cfg = construct_typeA_q2(args.d)
    elif c == "fano":
        cfg = construct_fano_example()
    elif c == "symplectic":
        cfg = construct_symplectic(args.q, args.d)
    elif c == "hermitian":
        cfg = construct_hermitian(args.q, args.m)
    else:  # pragma: no cover
        raise UsageError(c)
    _emit(args, "config", _config_payload(cfg))
    return EXIT_OK


def _finish_certificate(args, report) -> int:
    _emit(args, "certificate", report.to_json())
    print(report.summary(), file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return EXIT_OK if report.weakly_independent else EXIT_VERIFY


def cmd_verify(args) -> int:
    host = artifacts.load_host(args.poset)
    kind, payload = artifacts.read_artifact(args.config, ("config", "certificate"))
    obj = payload["config"] if kind == "certificate" else payload
    if obj is None:
        raise ArtifactError("certificate carries no configuration")
    cfg = config_from_json(obj, host)
    return _finish_certificate(args, verify_configuration(cfg))


def cmd_certify(args) -> int:
    path = args.poset or args.file
    if not path:
        raise UsageError("certify needs a poset file")
    report = certify_nonembeddability(artifacts.load_host(path))
    return _finish_certificate(args, report)


def cmd_vk(args) -> int:
    K = artifacts.load_complex(args.complex)
    try:
        result = vk_obstruction_mod2(K, seed=args.seed, ordered=args.ordered)
    except BudgetExceeded as exc:
        print(json.dumps({"d": K.dim, "verdict": "out-of-budget", "reason": str(exc)}))
        return EXIT_BUDGET
    if args.output:
        _emit(args, "vk-report", result)
    else:
        print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def cmd_export(args) -> int:
    if args.complex:
        K = artifacts.load_complex(args.complex)
    elif args.poset:
        K = reduced_order_complex(artifacts.as_explicit(artifacts.load_host(args.poset)))
    else:
        raise UsageError("export needs --complex or --poset")
    out = sys.stdout if args.output in (None, "-") else open(args.output, "w", encoding="utf-8")
    try:
        if args.format == "facets":
            for f in K.facets:
                print(" ".join(map(str, f)), file=out)
        elif args.format == "edge-list":
            for a, b in K.edges:
                print(a, b, file=out)
        else:
            print(json.dumps(graph_stats(K), sort_keys=True), file=out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oc", description=__doc__.splitlines()[0])
    parser.add_argument("--jobs", type=int, default=None,
                        help="accepted for compatibility; work runs in one process")
    sub = parser.add_subparsers(dest="command", required=True)

    def out(p):
        p.add_argument("-o", "--output", default=None, help="output file (default: stdout)")

    b = sub.add_parser("build", help="build a poset or complex artifact")
    b.add_argument("what", choices=["subspace", "polar", "boolean", "affine", "product",
                                    "d3power", "complex"])
    b.add_argument("--q", type=int)
    b.add_argument("--m", type=int)
    b.add_argument("--d", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--kind", choices=["alternating", "hermitian"], default="alternating")
    b.add_argument("--facets", help="JSON facet list (or a file holding one)")
    b.add_argument("--order-complex", help="poset artifact whose reduced order complex to build")
    b.add_argument("posets", nargs="*", help="poset files (for product)")
    out(b)
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="analyze a lattice")
    c.add_argument("target", choices=["lattice"])
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("config", help="write one of the explicit configurations")
    g.add_argument("construction", choices=["typeA", "typeA2", "fano", "symplectic", "hermitian"])
    g.add_argument("--q", type=int)
    g.add_argument("--d", type=int)
    g.add_argument("--m", type=int)
    out(g)
    g.set_defaults(func=cmd_config)

    v = sub.add_parser("verify", help="verify a configuration against a poset")
    v.add_argument("--poset", required=True)
    v.add_argument("--config", required=True)
    out(v)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("certify", help="construct and verify a certificate")
    r.add_argument("file", nargs="?")
    r.add_argument("--poset")
    out(r)
    r.set_defaults(func=cmd_certify)

    k = sub.add_parser("vk", help="mod-2 van Kampen obstruction of a complex")
    k.add_argument("--complex", required=True)
    k.add_argument("--seed", type=int, default=0)
    k.add_argument("--ordered", action="store_true", help="use the ordered-pair formulation")
    out(k)
    k.set_defaults(func=cmd_vk)

    e = sub.add_parser("export", help="export a complex")
    e.add_argument("--complex")
    e.add_argument("--poset", help="export the reduced order complex of a poset")
    e.add_argument("--format", choices=["facets", "edge-list", "graph-stats"], default="facets")
    out(e)
    e.set_defaults(func=cmd_export)
    return parser


def _required(args):
    need = {
        ("build", "subspace"): ["q", "m"], ("build", "polar"): ["q"],
        ("build", "boolean"): ["n"], ("build", "affine"): ["q"], ("build", "d3power"): ["d"],
        ("config", "typeA"): ["q", "d"], ("config", "typeA2"): ["d"],
        ("config", "symplectic"): ["q", "d"], ("config", "hermitian"): ["q", "m"],
    }
    key = (args.command, getattr(args, "what", None) or getattr(args, "construction", None))
    missing = [f"--{name}" for name in need.get(key, []) if getattr(args, name, None) is None]
    if missing:
        raise UsageError(f"{' '.join(key)} needs {', '.join(missing)}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        _required(args)
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"oc: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (VerificationFailed, InternalCriterionMismatch) as exc:
        print(f"oc: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (UsageError, ArtifactError, OrderCxError, ValueError, KeyError) as exc:
        print(f"oc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""JSON artifact envelopes: {kind, format_version, payload, digest}."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import ArtifactError, NotCanonical
from .linalg import SubspaceFq, rref
from .poset import Poset, canonical_json
from .simplicial import SimplicialComplex
from .spaces import space_from_descriptor

FORMAT_VERSION = 1
KINDS = ("poset", "complex", "config", "certificate", "vk-report")


def payload_digest(payload) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def envelope(kind: str, payload) -> dict:
    if kind not in KINDS:
        raise ArtifactError(f"unknown artifact kind {kind!r}")
    return {"kind": kind, "format_version": FORMAT_VERSION,
            "payload": payload, "digest": payload_digest(payload)}


def dumps(env: dict) -> str:
    return json.dumps(env, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def write_artifact(path, kind: str, payload) -> dict:
    env = envelope(kind, payload)
    text = dumps(env)
    if path is None or str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text, encoding="utf-8")
    return env


def read_artifact(path, kinds=None):
    """Load and check an envelope; returns (kind, payload)."""
    try:
        env = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ArtifactError(f"cannot read {path}: {exc}") from None
    if not isinstance(env, dict) or not {"kind", "format_version", "payload", "digest"} <= env.keys():
        raise ArtifactError(f"{path} is not an artifact envelope")
    if env["format_version"] != FORMAT_VERSION:
        raise ArtifactError(f"{path}: format version {env['format_version']} is not supported")
    if payload_digest(env["payload"]) != env["digest"]:
        raise ArtifactError(f"{path}: digest does not match payload")
    if kinds is not None and env["kind"] not in kinds:
        raise ArtifactError(f"{path}: expected {' or '.join(kinds)}, found {env['kind']}")
    return env["kind"], env["payload"]


# -- posets ------------------------------------------------------------------------


def poset_payload(host) -> dict:
    if isinstance(host, Poset):
        return {"poset": host.to_json()}
    return {"space": host.descriptor(), "poset": host.poset.to_json(),
            "backref": [U.to_json() for U in host.subspaces]}


def host_from_payload(payload: dict):
    """Explicit Poset, or an IsotropicPoset with its stored materialization."""
    P = Poset.from_json(payload["poset"])
    if "space" not in payload:
        return P
    host = space_from_descriptor(payload["space"])
    backref = payload.get("backref")
    if backref is None or len(backref) != P.n:
        raise ArtifactError("subspace poset without a matching backref table")
    subs = []
    for obj, label in zip(backref, P.labels):
        basis = tuple(tuple(int(x) for x in row) for row in obj["basis"])
        if obj["q"] != host.spec.q or obj["m"] != host.m:
            raise ArtifactError("backref entry over the wrong space")
        if basis and rref(host.spec, list(basis), host.m).basis != basis:
            raise NotCanonical(f"backref basis {obj['basis']} is not canonical")
        if basis != label:
            raise ArtifactError("backref table disagrees with the poset labels")
        U = SubspaceFq(host.spec, host.m, basis)
        if not host.is_totally_isotropic(U):
            raise ArtifactError(f"{U!r} is not totally isotropic")
        subs.append(U)
    host.__dict__["subspaces"] = subs
    host.__dict__["poset"] = P
    return host


def load_host(path):
    _, payload = read_artifact(path, ("poset",))
    return host_from_payload(payload)


def load_complex(path) -> SimplicialComplex:
    _, payload = read_artifact(path, ("complex",))
    return SimplicialComplex.from_json(payload)


def as_explicit(host):
    return host if isinstance(host, Poset) else host.poset


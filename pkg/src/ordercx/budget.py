"""Enumeration budgets.

Every exhaustive enumeration in the package is guarded by a named budget.
``OC_BUDGET`` overrides them: either a bare integer (applied to all
budgets) or a comma separated list such as ``vectors=1000000,pairs=50000``.
"""

from __future__ import annotations

import os

from .errors import BudgetExceeded

DEFAULTS = {
    "field": 2**16,  # p**n
    "vectors": 2**24,  # q**m vectors scanned
    "elements": 10**5,  # materialized poset elements
    "faces": 10**6,  # materialized simplicial faces
    "chains": 10**6,  # maximal chains of an order complex
    "pairs": 2 * 10**4,  # disjoint face pairs for the obstruction
    "config_d": 8,  # largest configuration dimension
}


def _overrides() -> dict:
    raw = os.environ.get("OC_BUDGET", "").strip()
    if not raw:
        return {}
    if raw.isdigit():
        return {key: int(raw) for key in DEFAULTS}
    out = {}
    for item in raw.split(","):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in DEFAULTS or not value.strip().isdigit():
            raise ValueError(f"bad OC_BUDGET entry: {item!r}")
        out[key] = int(value)
    return out


def limit(name: str) -> int:
    return _overrides().get(name, DEFAULTS[name])


def check(name: str, size: int, what: str = "") -> None:
    cap = limit(name)
    if size > cap:
        raise BudgetExceeded(f"{what or name}: {size} exceeds budget {name}={cap}")

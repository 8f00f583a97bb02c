"""Size caps guarding the exponential parts of the engine.

Defaults can be overridden through the ``COMBSMT_CAPS`` environment variable,
e.g. ``COMBSMT_CAPS="dnf_cubes=5000,bv4_vars=6"``.
"""

from __future__ import annotations

import os

from .errors import CombError

DEFAULTS: dict[str, int] = {
    "dnf_cubes": 10**6,
    "bv4_vars": 8,
    "even_vars": 8,
    "coloring_classes": 12,
    "grid_k": 8,
    "model_cap": 2 * 10**6,
    "bench_n_max": 8,
}


def parse_caps(text: str) -> dict[str, int]:
    caps: dict[str, int] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in DEFAULTS:
            raise CombError(f"bad COMBSMT_CAPS entry {item!r}")
        try:
            caps[key] = int(value)
        except ValueError:
            raise CombError(f"COMBSMT_CAPS value for {key} is not an integer: {value!r}") from None
    return caps


def get_cap(key: str) -> int:
    """Current value of cap ``key``, honouring the environment override."""
    env = os.environ.get("COMBSMT_CAPS")
    if env:
        overrides = parse_caps(env)
        if key in overrides:
            return overrides[key]
    return DEFAULTS[key]

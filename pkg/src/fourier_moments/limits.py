"""Size guards. Each default can be overridden through an environment variable."""

from __future__ import annotations

import os

DEFAULTS = {
    "table_order": 2**14,        # |G| bound for materialized subtraction tables
    "circulant_order": 2**12,    # |G| bound for materialized circulant matrices
    "max_terms": 10**7,          # enumeration nodes / summation terms
    "max_support": 10**6,        # intermediate support of sparse convolutions
}

ENV_VARS = {name: f"FOURIER_MOMENTS_{name.upper()}" for name in DEFAULTS}


def limit(name: str) -> int:
    """Current value of guard *name*, honouring its environment override."""
    raw = os.environ.get(ENV_VARS[name])
    if raw is None:
        return DEFAULTS[name]
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{ENV_VARS[name]} must be positive, got {raw!r}")
    return value

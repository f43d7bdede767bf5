"""Deterministic seed derivation.

A single master seed fans out into independent sub-streams keyed by
arbitrary tags (config keys, fold indices, restart indices).  Keying by
content rather than position means adding a grid cell never perturbs the
random streams of the other cells.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _entropy(part) -> int:
    if isinstance(part, str):
        digest = hashlib.sha256(part.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "big")
    return int(part) & _MASK64


def seed_sequence(*parts) -> np.random.SeedSequence:
    """Build a SeedSequence from integer and string tags."""
    return np.random.SeedSequence([_entropy(p) for p in parts])


def rng_for(*parts) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(*parts))


def derived_seed(*parts) -> int:
    """Collapse tags into a single 64-bit integer seed."""
    return int(seed_sequence(*parts).generate_state(1, np.uint64)[0])

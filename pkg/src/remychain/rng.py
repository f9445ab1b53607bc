"""Seeded random generators.

All sampling routines in this package take an explicit numpy Generator
(PCG64).  The same seed always reproduces the same draws; independent
substreams are derived with spawn(), which keys children off the parent's
seed sequence rather than its consumed state.
"""

from __future__ import annotations

import numpy as np

Rng = np.random.Generator


def make_rng(seed: int | None = None) -> Rng:
    """Fresh PCG64 generator.  seed=None draws OS entropy (not reproducible)."""
    return np.random.default_rng(seed)


def split_rng(rng: Rng, n: int) -> list[Rng]:
    """n independent child generators, deterministic given the parent's seed."""
    return list(rng.spawn(n))

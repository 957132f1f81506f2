"""Deterministic random streams keyed by (seed, index...)."""

from __future__ import annotations

import numpy as np

RandomStream = np.random.Generator


def make_stream(seed: int, *key: int) -> RandomStream:
    """PCG64 generator for a substream identified by ``key`` under ``seed``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))

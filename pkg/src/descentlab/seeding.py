"""Deterministic random-stream derivation.

Every stochastic routine in the package derives its generators from a
master seed plus a structured key, so results are reproducible and
independent of evaluation order: trial t always sees the stream
``(master_seed, STREAM_TRIAL, t, ...)`` no matter how many points were
computed before it.
"""

import numpy as np

# First key component, reserving separate namespaces under one master seed.
STREAM_TRIAL = 0
STREAM_BETA = 1

__all__ = ["STREAM_TRIAL", "STREAM_BETA", "substream"]


def substream(master_seed, *key):
    """Generator for the child stream addressed by ``key`` under ``master_seed``."""
    if not all(isinstance(k, (int, np.integer)) and k >= 0 for k in key):
        raise ValueError(f"stream key must be nonnegative integers, got {key!r}")
    seq = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(seq)

"""Deterministic sub-stream derivation from one master seed.

Every randomized entry point derives its generators as
(master seed, stream id, trial id, ...) spawn keys, so results are
independent of thread scheduling and reproducible bit-for-bit.
"""

from __future__ import annotations

import numpy as np

__all__ = ["substream", "STREAM_CLI", "STREAM_KAPPA", "STREAM_GAMMA",
           "STREAM_STEPS", "STREAM_LIPSCHITZ"]

STREAM_CLI = 0
STREAM_KAPPA = 10
STREAM_GAMMA = 20
STREAM_STEPS = 30
STREAM_LIPSCHITZ = 40


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the sub-stream (seed; key...)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))

"""Deterministic seed derivation for trials, replicates and oracle batches.

Every random quantity in mmdlab flows from one master seed. Sub-streams are
derived with ``numpy.random.SeedSequence`` so that a trial's draws depend only
on ``(master, keys)`` and never on scheduling or worker count.
"""

from __future__ import annotations

import numpy as np

_MASK_63 = (1 << 63) - 1


def derive_seed(master: int, *keys: int) -> int:
    """Return a stable 63-bit integer seed for the sub-stream ``keys``."""

    entropy = [int(master) & _MASK_63, *(int(key) & _MASK_63 for key in keys)]
    state = np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint32)
    return ((int(state[0]) << 32) | int(state[1])) & _MASK_63


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for an already-derived seed."""

    return np.random.default_rng(np.random.SeedSequence(int(seed) & _MASK_63))


__all__ = ["derive_seed", "make_rng"]

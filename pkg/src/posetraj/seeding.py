"""Splittable deterministic seed derivation.

Every random draw in the package flows from a 64-bit seed produced here, so
dataset content is a pure function of the root seed and stable identifiers,
never of worker scheduling or arrival order.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(*parts: int | str) -> int:
    """Fold integers and strings into one 64-bit seed.

    Strings are hashed with SHA-256 (first 8 bytes); the parts then feed
    numpy's SeedSequence, whose mixing is stable across platforms.
    """
    entropy = []
    for part in parts:
        if isinstance(part, str):
            entropy.append(int.from_bytes(hashlib.sha256(part.encode("utf-8")).digest()[:8], "big"))
        elif isinstance(part, (int, np.integer)):
            entropy.append(int(part) & 0xFFFFFFFFFFFFFFFF)
        else:
            raise TypeError(f"seed parts must be int or str, got {type(part).__name__}")
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed & 0xFFFFFFFFFFFFFFFF)))

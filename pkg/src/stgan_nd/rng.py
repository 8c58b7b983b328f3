"""Seed management.

Every run draws all of its randomness from one top-level integer seed.
Each role (splitting, weight init, noise sampling, dropout, ...) gets its
own named substream so that adding draws to one role never shifts the
values seen by another.
"""

import zlib

import numpy as np

from .errors import SpecError


def substream(seed: int, name: str) -> np.random.Generator:
    """Return an independent generator for one named role under ``seed``."""
    seed = int(seed)
    if seed < 0:
        raise SpecError(f"seed must be non-negative, got {seed}")
    tag = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([seed, tag]))

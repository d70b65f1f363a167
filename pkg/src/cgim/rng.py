"""Seeded random substreams.

Every stochastic quantity derives from one master seed. Snapshot ``i`` of a
pool draws from the substream ``(master, tag, i)`` so pools are reproducible
independently of how they are split across workers. Fresh Monte Carlo runs
use a counter-based hash (see ``_kernels.uniform``) keyed by a 64-bit value
drawn here.
"""
from __future__ import annotations

import zlib

import numpy as np

# tags separating independent families of substreams under one master seed
SELECT = 1
EVALUATE = 2
MC = 3


def _tag(tag) -> int:
    if isinstance(tag, str):
        return zlib.crc32(tag.encode())
    return int(tag)


def substream(master: int, tag, index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(master), spawn_key=(_tag(tag), int(index)))
    return np.random.Generator(np.random.PCG64(ss))


def hash_key(rng: np.random.Generator) -> int:
    """64-bit key for the counter-based generator, drawn from ``rng``."""
    return int(rng.integers(0, 2**63, dtype=np.int64))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)

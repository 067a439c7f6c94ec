"""Seeded random streams.

Every generator is a PCG64 stream derived from a ``SeedSequence`` whose
spawn key names its purpose, so streams are independent, reproducible and
stable across platforms. String keys are hashed with BLAKE2b.
"""

import hashlib

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

Key = int | str


def _key_int(key: Key) -> int:
    if isinstance(key, int):
        if key < 0:
            raise ValueError(f"stream keys must be non-negative: {key}")
        return key
    return int.from_bytes(hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest(), "little")


def make_seed(seed: int, *keys: Key) -> SeedSequence:
    """The seed sequence of stream ``keys`` under root ``seed``."""
    return SeedSequence(entropy=seed, spawn_key=tuple(_key_int(k) for k in keys))


def make_rng(seed: int, *keys: Key) -> Generator:
    return Generator(PCG64(make_seed(seed, *keys)))


def derive_seed(seed: int, *keys: Key) -> int:
    """A 63-bit integer seed for a child stream, for storing in params or files."""
    state = make_seed(seed, *keys).generate_state(1, np.uint64)[0]
    return int(state) >> 1

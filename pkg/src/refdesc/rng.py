"""Deterministic seed derivation for independent random streams.

Every randomized operation takes a 64-bit master seed and derives
per-purpose substreams by hashing (seed, tag, indices...) with BLAKE2b.
Substreams are therefore independent of execution order and worker
count: trial (i, j) always sees the same stream no matter which worker
runs it or how many trials ran before it.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(master_seed: int, *tags) -> int:
    """Derive a 64-bit seed from a master seed and a purpose path.

    Tags may be strings or integers; they are folded into the hash with
    type markers so ("a", 1) and ("a1",) cannot collide.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update((master_seed & _MASK64).to_bytes(8, "little"))
    for tag in tags:
        if isinstance(tag, str):
            h.update(b"s" + tag.encode("utf-8") + b"\x00")
        elif isinstance(tag, (int, np.integer)):
            h.update(b"i" + (int(tag) & _MASK64).to_bytes(8, "little"))
        else:
            raise TypeError(f"seed tag must be str or int, got {type(tag)!r}")
    return int.from_bytes(h.digest(), "little")


def substream(master_seed: int, *tags) -> np.random.Generator:
    """A generator seeded by derive_seed(master_seed, *tags)."""
    return np.random.default_rng(derive_seed(master_seed, *tags))

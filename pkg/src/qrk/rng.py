"""Seed derivation and random generators.

All randomness flows through :func:`make_rng`, which keys a Philox4x64-10
counter-based generator (numpy's ``Philox``) directly with a 64-bit seed.
Child seeds are derived with :func:`derive_seed`::

    blake2b(le64(master) || utf8(label) || 0x00 || le64(index), digest_size=8)

read back as a little-endian unsigned 64-bit integer. Any implementation
with Philox4x64-10 and BLAKE2b reproduces the same streams.
"""
from __future__ import annotations

import hashlib

import numpy as np

from .errors import ValidationError

SEED_BITS = 64
_MASK = (1 << SEED_BITS) - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= _MASK:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def derive_seed(master: int, label: str, index: int = 0) -> int:
    master = check_seed(master)
    payload = (master.to_bytes(8, "little") + label.encode("utf-8") + b"\x00"
               + (int(index) & _MASK).to_bytes(8, "little"))
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=check_seed(seed)))

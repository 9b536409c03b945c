"""Seeded randomness and the SHAKE-256 extendable-output function.

A single 64-bit seed fans out into independent per-purpose ``random.Random``
streams.  Each stream is keyed by SHAKE-256 over the seed and a label, so
adding a new consumer never shifts the numbers another consumer sees.
"""

from __future__ import annotations

import hashlib
import os
import random
import secrets

SEED_ENV = "PQLAB_SEED"


def xof(data: bytes, length: int) -> bytes:
    return hashlib.shake_256(data).digest(length)


class XofStream:
    """Incremental reader over a SHAKE-256 output stream."""

    def __init__(self, data: bytes):
        self._data = bytes(data)
        self._buf = b""
        self._pos = 0

    def read(self, n: int) -> bytes:
        need = self._pos + n
        if need > len(self._buf):
            size = max(need, 2 * len(self._buf), 136)
            self._buf = hashlib.shake_256(self._data).digest(size)
        out = self._buf[self._pos:need]
        self._pos = need
        return out

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        nbits = max(1, (bound - 1).bit_length())
        nbytes = (nbits + 7) // 8
        mask = (1 << nbits) - 1
        while True:
            v = int.from_bytes(self.read(nbytes), "little") & mask
            if v < bound:
                return v


def derive_rng(seed: int | None, label: str) -> random.Random:
    """Independent ``random.Random`` stream for ``label`` under ``seed``.

    ``seed=None`` draws fresh OS entropy.
    """
    if seed is None:
        seed = secrets.randbits(64)
    key = xof(f"pqlab:{int(seed)}:{label}".encode(), 32)
    return random.Random(int.from_bytes(key, "big"))


def default_seed() -> int | None:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return None
    return int(raw, 0)

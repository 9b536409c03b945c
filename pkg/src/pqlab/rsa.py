"""Textbook RSA with the two-digit letter code (blank=00, A=01, ..., Z=26).

Naming follows the classic worked example: ``d`` is the *public* exponent and
``g`` the *private* one.  There is no padding of any kind.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import modnum
from .errors import (
    BlockTooLarge,
    DecodingError,
    EncodingError,
    KeyGenError,
    NotInvertible,
)


@dataclass(frozen=True)
class RsaPublicKey:
    d: int
    n: int


@dataclass(frozen=True)
class RsaPrivateKey:
    g: int
    n: int


@dataclass(frozen=True)
class KeygenTrace:
    """Diagnostics only.  Real key generation discards these values."""

    p: int
    q: int
    phi: int


@dataclass(frozen=True)
class BlockMessage:
    blocks: tuple[int, ...]
    block_width: int

    def __str__(self):
        return " ".join(f"{b:0{self.block_width}d}" for b in self.blocks)


def rsa_keygen_trace(p: int, q: int, g: int):
    if p == q:
        raise KeyGenError("p and q must differ")
    for name, v in (("p", p), ("q", q)):
        if not modnum.is_prime(v):
            raise KeyGenError(f"{name}={v} is not prime")
    n = p * q
    phi = (p - 1) * (q - 1)
    if not 1 < g < n:
        raise KeyGenError(f"private exponent must satisfy 1 < g < n, got {g}")
    try:
        d = int(modnum.mod_inverse(g, phi))
    except NotInvertible:
        raise KeyGenError(f"gcd({phi}, {g}) = {modnum.gcd(phi, g)}; g must be coprime to phi(n)") from None
    if d == 1:
        raise KeyGenError(f"g={g} gives the degenerate public exponent 1")
    return RsaPublicKey(d, n), RsaPrivateKey(g, n), KeygenTrace(p, q, phi)


def rsa_keygen(p: int, q: int, g: int) -> tuple[RsaPublicKey, RsaPrivateKey]:
    pub, priv, _ = rsa_keygen_trace(p, q, g)
    return pub, priv


def block_width(n: int) -> int:
    """Widest even digit count whose largest code block ("2626...") is < n."""
    w = 0
    while int("26" * (w // 2 + 1)) < n:
        w += 2
    if w == 0:
        raise EncodingError(f"modulus {n} too small to hold a single letter")
    return w


def encode_text(text: str, n: int) -> BlockMessage:
    width = block_width(n)
    digits = []
    for ch in text.upper():
        if ch == " ":
            digits.append("00")
        elif "A" <= ch <= "Z":
            digits.append(f"{ord(ch) - ord('A') + 1:02d}")
        else:
            raise EncodingError(f"unsupported character {ch!r}")
    stream = "".join(digits)
    if len(stream) % width:
        stream += "0" * (width - len(stream) % width)
    blocks = tuple(int(stream[i:i + width]) for i in range(0, len(stream), width))
    return BlockMessage(blocks, width)


def decode_text(msg: BlockMessage) -> str:
    stream = "".join(f"{b:0{msg.block_width}d}" for b in msg.blocks)
    if len(stream) != len(msg.blocks) * msg.block_width:
        raise DecodingError("block wider than the declared width")
    out = []
    for i in range(0, len(stream), 2):
        code = int(stream[i:i + 2])
        if code > 26:
            raise DecodingError(f"letter code {code:02d} out of range")
        out.append(" " if code == 0 else chr(ord("A") + code - 1))
    return "".join(out).rstrip(" ")


def _apply(msg: BlockMessage, exponent: int, n: int) -> BlockMessage:
    for b in msg.blocks:
        if not 0 <= b < n:
            raise BlockTooLarge(f"block {b} not in [0, {n})")
    return BlockMessage(tuple(int(modnum.mod_pow(b, exponent, n)) for b in msg.blocks), msg.block_width)


def rsa_encrypt(msg: BlockMessage, key: RsaPublicKey) -> BlockMessage:
    return _apply(msg, key.d, key.n)


def rsa_decrypt(ct: BlockMessage, key: RsaPrivateKey) -> BlockMessage:
    return _apply(ct, key.g, key.n)


def rsa_sign(digest: int, key: RsaPrivateKey) -> int:
    if not 0 <= digest < key.n:
        raise BlockTooLarge(f"digest {digest} not in [0, {key.n})")
    return int(modnum.mod_pow(digest, key.g, key.n))


def rsa_verify(digest: int, sig: int, key: RsaPublicKey) -> bool:
    if not (0 <= digest < key.n and 0 <= sig < key.n):
        return False
    return int(modnum.mod_pow(sig, key.d, key.n)) == digest


def random_keypair(rng, bits: int = 16):
    """Small random key pair; ``bits`` is the size of each prime."""
    lo, hi = 1 << (bits - 1), (1 << bits) - 1

    def prime():
        while True:
            c = rng.randint(lo, hi) | 1
            if modnum.is_prime(c):
                return c

    while True:
        p, q = prime(), prime()
        if p == q:
            continue
        phi = (p - 1) * (q - 1)
        g = rng.randrange(3, phi, 2)
        try:
            return rsa_keygen(p, q, g)
        except KeyGenError:
            continue

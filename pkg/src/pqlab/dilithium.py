"""A simplified module-lattice signature.

Keys as in the KEM: ``t = A s + e`` with ``A`` of shape m x k.  Signing picks
a fresh small ``r1``, commits to ``w = rho(A r1)``, derives the challenge
``c = Psi(mu || w)`` in B_h and answers with ``r2 = r1 + c s``.  The
verifier recomputes ``rho(A r2 - t c) = rho(A r1 - e c)``.

Without the real scheme's hint mechanism the term ``e c`` can push a
coefficient of ``A r1`` across a rounding boundary, so :func:`sign` checks
its own output and draws a new ``r1`` when that happens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .errors import DomainError, ParameterMismatch, SigningFailed
from .polyring import (
    RingElem,
    RingMat,
    RingVec,
    pack_elem,
    pack_vec,
    packed_size,
    round_coeffs,
    scale_half_q,
    unpack_elem,
    unpack_vec,
)
from .rng import XofStream


@dataclass(frozen=True)
class DilithiumParams:
    name: str
    n: int
    q: int
    m: int
    k: int
    h: int
    eta: int
    gamma: int  # r1 coefficients are uniform in [-gamma, gamma]


TOY = DilithiumParams("toy", 8, 257, 2, 2, 2, 1, 16)
LEVEL2 = DilithiumParams("2", 256, 8380417, 4, 4, 60, 2, 1 << 17)
LEVEL3 = DilithiumParams("3", 256, 8380417, 6, 5, 60, 2, 1 << 17)
LEVEL5 = DilithiumParams("5", 256, 8380417, 8, 7, 60, 2, 1 << 17)
PRESETS = {p.name: p for p in (TOY, LEVEL2, LEVEL3, LEVEL5)}

MAX_RETRIES = 1000


def params(name: str) -> DilithiumParams:
    try:
        return PRESETS[str(name)]
    except KeyError:
        raise DomainError(f"unknown Dilithium preset {name!r}; have {sorted(PRESETS)}") from None


def ball_size(n: int, h: int) -> int:
    """``|B_h| = C(n, h) * 2^h``."""
    return comb(n, h) * 2**h


@dataclass(frozen=True)
class DilithiumPublicKey:
    params: DilithiumParams
    A: RingMat
    t: RingVec


@dataclass(frozen=True)
class DilithiumPrivateKey:
    params: DilithiumParams
    s: RingVec


@dataclass(frozen=True)
class DilithiumSignature:
    r2: RingVec
    c: RingElem
    retries: int = field(default=0, compare=False)

    def to_bytes(self) -> bytes:
        return pack_vec(self.r2) + pack_elem(self.c)

    @classmethod
    def from_bytes(cls, data: bytes, p: DilithiumParams) -> "DilithiumSignature":
        size = packed_size(p.n, p.q)
        if len(data) != (p.k + 1) * size:
            raise DomainError("signature has the wrong length")
        return cls(unpack_vec(data[:p.k * size], p.k, p.n, p.q), unpack_elem(data[p.k * size:], p.n, p.q))


def _small(n: int, q: int, bound: int, rng) -> RingElem:
    return RingElem(n, q, tuple(rng.randint(-bound, bound) for _ in range(n)))


def _small_vec(p: DilithiumParams, count: int, bound: int, rng) -> RingVec:
    return RingVec(tuple(_small(p.n, p.q, bound, rng) for _ in range(count)))


def keygen_from(p: DilithiumParams, s: RingVec, A: RingMat, e: RingVec):
    if A.shape != (p.m, p.k) or len(s) != p.k or len(e) != p.m:
        raise ParameterMismatch("key material does not match (m, k)")
    return DilithiumPublicKey(p, A, A @ s + e), DilithiumPrivateKey(p, s)


def keygen_full(p: DilithiumParams, rng):
    A = RingMat(tuple(tuple(RingElem(p.n, p.q, tuple(rng.randrange(p.q) for _ in range(p.n)))
                            for _ in range(p.k)) for _ in range(p.m)))
    s = _small_vec(p, p.k, p.eta, rng)
    e = _small_vec(p, p.m, p.eta, rng)
    pub, priv = keygen_from(p, s, A, e)
    return pub, priv, e


def keygen(p: DilithiumParams, rng):
    pub, priv, _ = keygen_full(p, rng)
    return pub, priv


def rho(v: RingVec) -> RingVec:
    """Each coefficient to 0 or round(q/2), whichever is nearer."""
    return RingVec(tuple(scale_half_q(round_coeffs(x)) for x in v))


def encode_w(w: RingVec) -> bytes:
    return pack_vec(w)


def decode_w(data: bytes, p: DilithiumParams) -> RingVec:
    return unpack_vec(data, p.m, p.n, p.q)


def hash_to_ball(data: bytes, p: DilithiumParams) -> RingElem:
    """Psi: SHAKE-256 stream driving a partial Fisher-Yates shuffle into B_h.

    The first ``ceil(h/8)`` bytes supply sign bits; then for ``i`` from
    ``n-h`` to ``n-1`` an index ``j <= i`` is drawn, ``c[i] = c[j]`` and
    ``c[j] = +-1``.
    """
    if not 0 < p.h <= p.n:
        raise DomainError("need 0 < h <= n")
    xs = XofStream(b"psi" + data)
    signs = int.from_bytes(xs.read((p.h + 7) // 8), "little")
    c = [0] * p.n
    for idx, i in enumerate(range(p.n - p.h, p.n)):
        j = xs.below(i + 1)
        c[i] = c[j]
        c[j] = -1 if (signs >> idx) & 1 else 1
    return RingElem(p.n, p.q, tuple(c))


def is_challenge(c: RingElem, h: int) -> bool:
    cc = c.centered()
    return sum(1 for x in cc if x) == h and all(x in (-1, 0, 1) for x in cc)


def sign(priv: DilithiumPrivateKey, pub: DilithiumPublicKey, message: bytes, rng,
         max_retries: int = MAX_RETRIES) -> DilithiumSignature:
    p = priv.params
    if pub.params != p:
        raise ParameterMismatch("key pair parameters differ")
    for attempt in range(max_retries):
        r1 = _small_vec(p, p.k, p.gamma, rng)
        w = rho(pub.A @ r1)
        c = hash_to_ball(bytes(message) + encode_w(w), p)
        r2 = r1 + priv.s.scale(c)
        sig = DilithiumSignature(r2, c, attempt)
        if verify(pub, message, sig):
            return sig
    raise SigningFailed(f"no verifying signature after {max_retries} attempts")


def verify(pub: DilithiumPublicKey, message: bytes, sig) -> bool:
    try:
        p = pub.params
        r2, c = sig.r2, sig.c
        if len(r2) != p.k or (c.n, c.q) != (p.n, p.q) or any((x.n, x.q) != (p.n, p.q) for x in r2):
            return False
        if not is_challenge(c, p.h):
            return False
        w_hat = rho(pub.A @ r2 - pub.t.scale(c))
        return hash_to_ball(bytes(message) + encode_w(w_hat), p) == c
    except (AttributeError, TypeError, ValueError):
        return False

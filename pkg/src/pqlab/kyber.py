"""Module-LWE encryption and a KEM on top of it.

Keys are ``s`` (private) and ``(A, t = A s + e)`` (public).  A message bit
string is lifted to ``{0, round(q/2)}`` coefficients; ``v - s^T u`` then
equals the lifted message plus the noise ``e^T r + e2 - s^T e1``, which
rounding removes as long as it stays below ``q/4``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterMismatch
from .polyring import (
    RingElem,
    RingMat,
    RingVec,
    bits_to_bytes,
    bits_to_poly,
    bytes_to_bits,
    pack_elem,
    pack_vec,
    packed_size,
    poly_to_bits,
    round_coeffs,
    scale_half_q,
    unpack_elem,
    unpack_vec,
)
from .rng import xof


@dataclass(frozen=True)
class KyberParams:
    name: str
    n: int
    q: int
    k: int
    eta: int


TOY = KyberParams("toy", 4, 7, 2, 1)
K512 = KyberParams("512", 256, 3329, 2, 2)
K768 = KyberParams("768", 256, 3329, 3, 2)
K1024 = KyberParams("1024", 256, 3329, 4, 2)
PRESETS = {p.name: p for p in (TOY, K512, K768, K1024)}


def params(name: str) -> KyberParams:
    try:
        return PRESETS[str(name)]
    except KeyError:
        raise DomainError(f"unknown Kyber preset {name!r}; have {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class KyberPublicKey:
    params: KyberParams
    A: RingMat
    t: RingVec

    def to_bytes(self) -> bytes:
        return b"".join(pack_elem(a) for row in self.A.rows for a in row) + pack_vec(self.t)

    @classmethod
    def from_bytes(cls, data: bytes, p: KyberParams) -> "KyberPublicKey":
        size = packed_size(p.n, p.q)
        if len(data) != (p.k * p.k + p.k) * size:
            raise DomainError("public key has the wrong length")
        elems = [unpack_elem(data[i * size:(i + 1) * size], p.n, p.q) for i in range(p.k * p.k + p.k)]
        A = RingMat(tuple(tuple(elems[i * p.k:(i + 1) * p.k]) for i in range(p.k)))
        return cls(p, A, RingVec(tuple(elems[p.k * p.k:])))


@dataclass(frozen=True)
class KyberPrivateKey:
    params: KyberParams
    s: RingVec


@dataclass(frozen=True)
class KyberCiphertext:
    params: KyberParams
    u: RingVec
    v: RingElem

    def to_bytes(self) -> bytes:
        """Fixed-width little-endian coefficients, ``u`` then ``v``."""
        return pack_vec(self.u) + pack_elem(self.v)

    @classmethod
    def from_bytes(cls, data: bytes, p: KyberParams) -> "KyberCiphertext":
        size = packed_size(p.n, p.q)
        if len(data) != (p.k + 1) * size:
            raise DomainError("ciphertext has the wrong length")
        return cls(p, unpack_vec(data[:p.k * size], p.k, p.n, p.q), unpack_elem(data[p.k * size:], p.n, p.q))


@dataclass(frozen=True)
class EncryptionRandomness:
    r: RingVec
    e1: RingVec
    e2: RingElem


# -- sampling -----------------------------------------------------------------

def _cbd_table(eta: int) -> tuple[int, ...]:
    low = (1 << eta) - 1
    return tuple(bin(x & low).count("1") - bin(x >> eta).count("1") for x in range(1 << (2 * eta)))


_CBD = {eta: _cbd_table(eta) for eta in (1, 2, 3)}


def sample_cbd(n: int, q: int, eta: int, rng) -> RingElem:
    """Centered binomial: ``sum of eta bits - sum of eta bits`` per coefficient."""
    table = _CBD.get(eta) or _CBD.setdefault(eta, _cbd_table(eta))
    w = 2 * eta
    bits = rng.getrandbits(w * n)
    mask = (1 << w) - 1
    return RingElem(n, q, tuple(table[(bits >> (w * i)) & mask] for i in range(n)))


def sample_error(p: KyberParams, rng, count: int | None = None):
    """One small element, or a vector of ``count`` of them."""
    if count is None:
        return sample_cbd(p.n, p.q, p.eta, rng)
    return RingVec(tuple(sample_cbd(p.n, p.q, p.eta, rng) for _ in range(count)))


def sample_uniform(n: int, q: int, rng) -> RingElem:
    return RingElem(n, q, tuple(rng.randrange(q) for _ in range(n)))


def sample_matrix(p: KyberParams, rng) -> RingMat:
    return RingMat(tuple(tuple(sample_uniform(p.n, p.q, rng) for _ in range(p.k)) for _ in range(p.k)))


def sample_randomness(p: KyberParams, rng) -> EncryptionRandomness:
    return EncryptionRandomness(sample_error(p, rng, p.k), sample_error(p, rng, p.k), sample_error(p, rng))


# -- the scheme ---------------------------------------------------------------

def keygen_from(p: KyberParams, s: RingVec, A: RingMat, e: RingVec) -> tuple[KyberPublicKey, KyberPrivateKey]:
    if A.shape != (p.k, p.k) or len(s) != p.k or len(e) != p.k:
        raise ParameterMismatch("key material does not match k")
    t = A @ s + e
    return KyberPublicKey(p, A, t), KyberPrivateKey(p, s)


def keygen_full(p: KyberParams, rng):
    """Keys plus the error vector ``e`` (needed for noise diagnostics)."""
    A = sample_matrix(p, rng)
    s = sample_error(p, rng, p.k)
    e = sample_error(p, rng, p.k)
    pub, priv = keygen_from(p, s, A, e)
    return pub, priv, e


def keygen(p: KyberParams, rng) -> tuple[KyberPublicKey, KyberPrivateKey]:
    pub, priv, _ = keygen_full(p, rng)
    return pub, priv


def encode_message(p: KyberParams, bits) -> RingElem:
    return scale_half_q(bits_to_poly(bits, p.n, p.q))


def encrypt(pub: KyberPublicKey, bits, rand: EncryptionRandomness) -> KyberCiphertext:
    p = pub.params
    m = encode_message(p, bits)
    u = pub.A.T @ rand.r + rand.e1
    v = pub.t.dot(rand.r) + rand.e2 + m
    return KyberCiphertext(p, u, v)


def noisy_message(priv: KyberPrivateKey, ct: KyberCiphertext) -> RingElem:
    """``m_hat = v - s^T u`` before rounding."""
    if priv.params != ct.params:
        raise ParameterMismatch("key and ciphertext parameters differ")
    return ct.v - priv.s.dot(ct.u)


def decrypt(priv: KyberPrivateKey, ct: KyberCiphertext) -> str:
    return poly_to_bits(round_coeffs(noisy_message(priv, ct)))


def noise_term(priv: KyberPrivateKey, e: RingVec, rand: EncryptionRandomness) -> RingElem:
    """``e^T r + e2 - s^T e1``."""
    return e.dot(rand.r) + rand.e2 - priv.s.dot(rand.e1)


# -- KEM ----------------------------------------------------------------------

SHARED_BYTES = 32


def _derive(secret_bits: str, ct: KyberCiphertext) -> bytes:
    return xof(bits_to_bytes(secret_bits) + ct.to_bytes(), SHARED_BYTES)


def kem_encapsulate(pub: KyberPublicKey, rng) -> tuple[bytes, KyberCiphertext]:
    p = pub.params
    if p.n < 256:
        raise DomainError("the KEM needs at least 256 message bits (n >= 256)")
    secret = bytes_to_bits(rng.getrandbits(p.n).to_bytes(p.n // 8, "big"))
    ct = encrypt(pub, secret, sample_randomness(p, rng))
    return _derive(secret, ct), ct


def kem_decapsulate(priv: KyberPrivateKey, ct: KyberCiphertext) -> bytes:
    return _derive(decrypt(priv, ct), ct)


# -- the published toy example --------------------------------------------------

def _toy(*polys: str) -> tuple[RingElem, ...]:
    return tuple(RingElem.parse(s, TOY.n, TOY.q) for s in polys)


@dataclass(frozen=True)
class ToyExample:
    s: RingVec
    A: RingMat
    e: RingVec
    r: RingVec
    e1: RingVec
    e2: RingElem
    message: str


def toy_example() -> ToyExample:
    """The worked n=4, q=7, k=2 instance with its published inputs."""
    a00, a01, a10, a11 = _toy("4x^3+5x+4", "3x^3+5x^2", "5x^3+3x", "6x^2+6")
    return ToyExample(
        s=RingVec(_toy("x^3+x+1", "x+2")),
        A=RingMat(((a00, a01), (a10, a11))),
        e=RingVec(_toy("x^2", "x")),
        r=RingVec(_toy("x^2", "1")),
        e1=RingVec(_toy("x+1", "1")),
        e2=_toy("x^3+x")[0],
        message="1001",
    )


# intermediate values as printed alongside the published example
PUBLISHED_TOY_VALUES = {
    "t": ("5x^3-2x^2+2x-1", "4x^3-4x^2+3x+4"),
    "u": ("3x^3+4x^2+1", "6x^2-3x-5"),
    "v": "3x^3+2x^2-x-2",
    "m_hat": "3x^3+6x^2+6x+3",
    "rho": "x^3+1",
}


@dataclass(frozen=True)
class ToyTrace:
    t: RingVec
    u: RingVec
    v: RingElem
    m_scaled: RingElem
    m_hat: RingElem
    noise: RingElem
    rho: RingElem
    decrypted: str


def run_toy_example() -> ToyTrace:
    ex = toy_example()
    pub, priv = keygen_from(TOY, ex.s, ex.A, ex.e)
    rand = EncryptionRandomness(ex.r, ex.e1, ex.e2)
    ct = encrypt(pub, ex.message, rand)
    m_hat = noisy_message(priv, ct)
    rho = round_coeffs(m_hat)
    return ToyTrace(
        t=pub.t, u=ct.u, v=ct.v,
        m_scaled=encode_message(TOY, ex.message),
        m_hat=m_hat,
        noise=noise_term(priv, ex.e, rand),
        rho=rho,
        decrypted=poly_to_bits(rho),
    )


# -- batched trials (small n) -------------------------------------------------

def _negacyclic_tensor(n: int) -> np.ndarray:
    S = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            k = i + j
            if k < n:
                S[i, j, k] = 1
            else:
                S[i, j, k - n] = -1
    return S


@dataclass(frozen=True)
class TrialBatch:
    """Many independent keygen/encrypt/decrypt runs as arrays.

    Shapes: ``A`` (count, k, k, n); ``s, e, r, e1`` (count, k, n);
    ``e2, bits, m_hat, noise, decrypted`` (count, n).  Bits are stored in
    ascending-degree order like coefficients.  ``noise`` is centered.
    """

    params: KyberParams
    A: np.ndarray
    s: np.ndarray
    e: np.ndarray
    r: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    bits: np.ndarray
    m_hat: np.ndarray
    noise: np.ndarray
    decrypted: np.ndarray

    def __len__(self):
        return len(self.bits)

    def success(self) -> np.ndarray:
        return np.all(self.decrypted == self.bits, axis=1)

    def noise_inf(self) -> np.ndarray:
        return np.abs(self.noise).max(axis=1)

    def instance(self, i: int):
        """Trial ``i`` as scalar objects: (s, A, e, randomness, message bits)."""
        p = self.params

        def el(a):
            return RingElem(p.n, p.q, tuple(int(x) for x in a))

        def vec(a):
            return RingVec(tuple(el(x) for x in a))

        A = RingMat(tuple(tuple(el(a) for a in row) for row in self.A[i]))
        rand = EncryptionRandomness(vec(self.r[i]), vec(self.e1[i]), el(self.e2[i]))
        msg = "".join(str(int(b)) for b in self.bits[i][::-1])
        return vec(self.s[i]), A, vec(self.e[i]), rand, msg


def batch_trials(p: KyberParams, count: int, seed: int) -> TrialBatch:
    """Run ``count`` random instances at once (numpy; n <= 32 only)."""
    if p.n > 32:
        raise DomainError("batched trials are meant for small n")
    n, q, k, eta = p.n, p.q, p.k, p.eta
    gen = np.random.default_rng(seed)
    S = _negacyclic_tensor(n)

    def cbd(*shape):
        a = gen.integers(0, 2, size=shape + (eta,)).sum(axis=-1)
        b = gen.integers(0, 2, size=shape + (eta,)).sum(axis=-1)
        return a - b

    def mul(a, b):
        return np.einsum("...i,...j,ijk->...k", a, b, S)

    A = gen.integers(0, q, size=(count, k, k, n))
    s, e = cbd(count, k, n), cbd(count, k, n)
    r, e1, e2 = cbd(count, k, n), cbd(count, k, n), cbd(count, n)
    bits = gen.integers(0, 2, size=(count, n))

    t = (mul(A, s[:, None, :, :]).sum(axis=2) + e) % q
    u = (mul(np.swapaxes(A, 1, 2), r[:, None, :, :]).sum(axis=2) + e1) % q
    v = (mul(t, r).sum(axis=1) + e2 + bits * ((q + 1) // 2)) % q
    m_hat = (v - mul(s, u).sum(axis=1)) % q
    noise = (mul(e, r).sum(axis=1) + e2 - mul(s, e1).sum(axis=1)) % q
    noise = np.where(noise > q // 2, noise - q, noise)

    h = (q + 1) // 2
    d_half = np.minimum((m_hat - h) % q, (h - m_hat) % q)
    d_zero = np.minimum(m_hat, q - m_hat)
    decrypted = (d_half <= d_zero).astype(np.int64)
    return TrialBatch(p, A, s % q, e % q, r % q, e1 % q, e2 % q, bits, m_hat, noise, decrypted)

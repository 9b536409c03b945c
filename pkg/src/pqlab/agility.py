"""Crypto-agility: a plugin registry, hybrid signatures and Mosca's inequality.

Schemes are plugged in as :class:`SchemeDescriptor` objects whose callables
work on bytes, so hybrid composition never needs to know which algorithm it
is driving.  Three hybrid modes exist:

* ``c-then-q``: the classical scheme signs ``msg``; the quantum-safe scheme
  signs ``msg`` chained with that signature.
* ``q-then-c``: the same with the roles swapped.
* ``parallel``: both sign ``msg`` independently.
"""

from __future__ import annotations

import hashlib
import math
import threading
from dataclasses import dataclass
from typing import Any, Callable

from . import dilithium, ecc, rsa
from .errors import DomainError, RegistryError

SIGNER = "signer"
KEM = "kem"

MODES = ("c-then-q", "q-then-c", "parallel")


@dataclass(frozen=True)
class SchemeDescriptor:
    id: str
    kind: str
    quantum_safe: bool
    keygen: Callable[[Any], tuple[Any, Any]]
    sign: Callable[[Any, bytes, Any], bytes] | None = None
    verify: Callable[[Any, bytes, bytes], bool] | None = None
    encapsulate: Callable | None = None
    decapsulate: Callable | None = None

    def __post_init__(self):
        if self.kind not in (SIGNER, KEM):
            raise DomainError(f"unknown scheme kind {self.kind!r}")
        if self.kind == SIGNER and (self.sign is None or self.verify is None):
            raise DomainError("a signer needs sign and verify")
        if self.kind == KEM and (self.encapsulate is None or self.decapsulate is None):
            raise DomainError("a KEM needs encapsulate and decapsulate")


class Registry:
    """Thread-safe id -> descriptor map."""

    def __init__(self):
        self._lock = threading.Lock()
        self._schemes: dict[str, SchemeDescriptor] = {}

    def register(self, desc: SchemeDescriptor) -> None:
        with self._lock:
            if desc.id in self._schemes:
                raise RegistryError(f"scheme {desc.id!r} is already registered")
            self._schemes[desc.id] = desc

    def unregister(self, scheme_id: str) -> SchemeDescriptor:
        with self._lock:
            try:
                return self._schemes.pop(scheme_id)
            except KeyError:
                raise RegistryError(f"unknown scheme {scheme_id!r}") from None

    def lookup(self, scheme_id: str) -> SchemeDescriptor:
        with self._lock:
            try:
                return self._schemes[scheme_id]
            except KeyError:
                raise RegistryError(f"unknown scheme {scheme_id!r}") from None

    def ids(self) -> list[str]:
        with self._lock:
            return sorted(self._schemes)

    def __contains__(self, scheme_id: str) -> bool:
        with self._lock:
            return scheme_id in self._schemes


# -- adapters -------------------------------------------------------------------

def _digest(msg: bytes) -> int:
    return int.from_bytes(hashlib.sha3_256(msg).digest(), "big")


def ecdsa_scheme(curve_name: str = "f65521", scheme_id: str = "ecdsa") -> SchemeDescriptor:
    curve, G, order = ecc.preset(curve_name)
    width = (order.bit_length() + 7) // 8

    def keygen(rng):
        priv, pub = ecc.ecdh_keypair(G, order, curve, rng)
        return pub, priv

    def sign(priv, msg, rng):
        r, s = ecc.ecdsa_sign(_digest(msg), priv, G, order, curve, rng)
        return r.to_bytes(width, "big") + s.to_bytes(width, "big")

    def verify(pub, msg, sig):
        if len(sig) != 2 * width:
            return False
        r, s = int.from_bytes(sig[:width], "big"), int.from_bytes(sig[width:], "big")
        return ecc.ecdsa_verify(_digest(msg), (r, s), pub, G, order, curve)

    return SchemeDescriptor(scheme_id, SIGNER, False, keygen, sign, verify)


def rsa_scheme(bits: int = 16, scheme_id: str = "rsa") -> SchemeDescriptor:
    """Textbook RSA on ``sha3-256(msg) mod n``; ``bits`` per prime."""

    def keygen(rng):
        return rsa.random_keypair(rng, bits)

    def width(n):
        return (n.bit_length() + 7) // 8

    def sign(priv, msg, rng):
        return rsa.rsa_sign(_digest(msg) % priv.n, priv).to_bytes(width(priv.n), "big")

    def verify(pub, msg, sig):
        if len(sig) != width(pub.n):
            return False
        return rsa.rsa_verify(_digest(msg) % pub.n, int.from_bytes(sig, "big"), pub)

    return SchemeDescriptor(scheme_id, SIGNER, False, keygen, sign, verify)


def dilithium_scheme(p: dilithium.DilithiumParams = dilithium.LEVEL2, scheme_id: str = "dilithium") -> SchemeDescriptor:
    def keygen(rng):
        return dilithium.keygen(p, rng)

    def sign(keys, msg, rng):
        pub, priv = keys
        return dilithium.sign(priv, pub, msg, rng).to_bytes()

    def verify(pub, msg, sig):
        try:
            parsed = dilithium.DilithiumSignature.from_bytes(sig, p)
        except DomainError:
            return False
        return dilithium.verify(pub, msg, parsed)

    def keygen_pair(rng):
        pub, priv = keygen(rng)
        return pub, (pub, priv)  # signing needs A and t as well

    return SchemeDescriptor(scheme_id, SIGNER, True, keygen_pair, sign, verify)


def default_registry() -> Registry:
    reg = Registry()
    for desc in (ecdsa_scheme(), rsa_scheme(), dilithium_scheme()):
        reg.register(desc)
    return reg


# -- hybrid signatures ----------------------------------------------------------

@dataclass(frozen=True)
class HybridSignature:
    mode: str
    parts: tuple[tuple[str, bytes], ...]

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"unknown hybrid mode {self.mode!r}; have {MODES}")
        if len(self.parts) != 2:
            raise DomainError("a hybrid signature has exactly two parts")


def chain(msg: bytes, first_sig: bytes) -> bytes:
    """Injective ``msg || sig``: each piece carries a 4-byte big-endian length."""
    return len(msg).to_bytes(4, "big") + msg + len(first_sig).to_bytes(4, "big") + first_sig


def _signer(registry: Registry, scheme_id: str, quantum_safe: bool) -> SchemeDescriptor:
    desc = registry.lookup(scheme_id)
    if desc.kind != SIGNER:
        raise RegistryError(f"{scheme_id!r} is not a signer")
    if desc.quantum_safe != quantum_safe:
        want = "quantum-safe" if quantum_safe else "classical"
        raise RegistryError(f"{scheme_id!r} is not a {want} scheme")
    return desc


def hybrid_sign(msg: bytes, classical_id: str, pq_id: str, mode: str, registry: Registry,
                private_keys: dict, rng) -> HybridSignature:
    """``private_keys`` maps scheme id to that scheme's signing key."""
    if mode not in MODES:
        raise DomainError(f"unknown hybrid mode {mode!r}; have {MODES}")
    c = _signer(registry, classical_id, False)
    q = _signer(registry, pq_id, True)
    if mode == "parallel":
        parts = ((c.id, c.sign(private_keys[c.id], msg, rng)), (q.id, q.sign(private_keys[q.id], msg, rng)))
    else:
        first, second = (c, q) if mode == "c-then-q" else (q, c)
        s1 = first.sign(private_keys[first.id], msg, rng)
        s2 = second.sign(private_keys[second.id], chain(msg, s1), rng)
        parts = ((first.id, s1), (second.id, s2))
    return HybridSignature(mode, parts)


def hybrid_verify(msg: bytes, hsig: HybridSignature, registry: Registry, public_keys: dict) -> bool:
    try:
        (id1, s1), (id2, s2) = hsig.parts
        d1, d2 = registry.lookup(id1), registry.lookup(id2)
        if d1.kind != SIGNER or d2.kind != SIGNER:
            return False
        expected = {"c-then-q": (False, True), "q-then-c": (True, False), "parallel": (False, True)}[hsig.mode]
        if (d1.quantum_safe, d2.quantum_safe) != expected:
            return False
        second_input = msg if hsig.mode == "parallel" else chain(msg, s1)
        return bool(d1.verify(public_keys[id1], msg, s1)) and bool(d2.verify(public_keys[id2], second_input, s2))
    except (RegistryError, KeyError, ValueError, TypeError):
        return False


# -- Mosca's inequality ------------------------------------------------------------

@dataclass(frozen=True)
class MoscaInput:
    t_migrate: float
    t_confi: float
    t_crqc: float

    def __post_init__(self):
        for name in ("t_migrate", "t_confi", "t_crqc"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"{name} must be a finite nonnegative number, got {v}")


@dataclass(frozen=True)
class MoscaVerdict:
    slack: float
    at_risk: bool
    in_trouble: bool

    @property
    def label(self) -> str:
        if self.in_trouble:
            return "AT_RISK,IN_TROUBLE"
        return "AT_RISK" if self.at_risk else "SAFE"


def mosca_evaluate(inp: MoscaInput) -> MoscaVerdict:
    """Slack ``t_crqc - (t_migrate + t_confi)``; negative slack means data is exposed."""
    slack = inp.t_crqc - (inp.t_migrate + inp.t_confi)
    return MoscaVerdict(slack, slack < 0, inp.t_confi > inp.t_crqc)


# (label, migrate, confi, crqc)
SCENARIOS = (
    ("slow migration", 5, 10, 12),
    ("ample margin", 2, 3, 10),
    ("retention outlives the horizon", 1, 12, 10),
)

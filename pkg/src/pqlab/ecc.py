"""Short-Weierstrass elliptic curves over small prime fields.

The group is written multiplicatively, as in the classic exposition: the
operation is :func:`compose` and repeated composition is :func:`point_pow`.
The point at infinity :data:`INFINITY` is the neutral element.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import modnum
from .errors import DomainError, NoLogarithm


@dataclass(frozen=True)
class CurveParams:
    p: int
    a: int
    b: int

    def __post_init__(self):
        if self.p <= 3 or not modnum.is_prime(self.p):
            raise DomainError(f"field size must be a prime > 3, got {self.p}")
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise DomainError("singular curve: 4a^3 + 27b^2 = 0 (mod p)")

    def __str__(self):
        return f"y^2 = x^3 + {self.a}x + {self.b} over F_{self.p}"


@dataclass(frozen=True)
class CurvePoint:
    x: int | None
    y: int | None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self):
        return "N" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = CurvePoint(None, None)

# desk presets; both groups have prime order
PRESETS = {
    "f97": (CurveParams(97, 1, 4), 89),
    "f65521": (CurveParams(65521, 5, 5), 65111),
}


def on_curve(pt: CurvePoint, c: CurveParams) -> bool:
    if pt.is_infinity:
        return True
    x, y = pt.x, pt.y
    if not (0 <= x < c.p and 0 <= y < c.p):
        return False
    return (y * y - (x**3 + c.a * x + c.b)) % c.p == 0


def inverse(pt: CurvePoint, c: CurveParams) -> CurvePoint:
    """Reflection across the x-axis."""
    if pt.is_infinity:
        return pt
    return CurvePoint(pt.x, (-pt.y) % c.p)


def compose(P: CurvePoint, Q: CurvePoint, c: CurveParams) -> CurvePoint:
    for pt in (P, Q):
        if not on_curve(pt, c):
            raise DomainError(f"{pt} is not on {c}")
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    p = c.p
    if P.x == Q.x:
        if (P.y + Q.y) % p == 0:
            # vertical chord, or tangent at a point with y = 0
            return INFINITY
        lam = (3 * P.x * P.x + c.a) * int(modnum.mod_inverse(2 * P.y, p)) % p
    else:
        lam = (Q.y - P.y) * int(modnum.mod_inverse(Q.x - P.x, p)) % p
    x3 = (lam * lam - P.x - Q.x) % p
    y3 = (lam * (P.x - x3) - P.y) % p
    return CurvePoint(x3, y3)


def point_pow(G: CurvePoint, s: int, c: CurveParams) -> CurvePoint:
    if s < 0:
        return point_pow(inverse(G, c), -s, c)
    result = INFINITY
    base = G
    while s:
        if s & 1:
            result = compose(result, base, c)
        base = compose(base, base, c)
        s >>= 1
    return result


def enumerate_points(c: CurveParams) -> list[CurvePoint]:
    """All affine points plus INFINITY (square roots by exhaustive table)."""
    roots: dict[int, list[int]] = {}
    for y in range(c.p):
        roots.setdefault(y * y % c.p, []).append(y)
    pts = [INFINITY]
    for x in range(c.p):
        rhs = (x**3 + c.a * x + c.b) % c.p
        for y in roots.get(rhs, ()):
            pts.append(CurvePoint(x, y))
    return pts


def point_order(G: CurvePoint, c: CurveParams) -> int:
    k, cur = 1, G
    while not cur.is_infinity:
        cur = compose(cur, G, c)
        k += 1
    return k


def ec_dlog_bruteforce(G: CurvePoint, P: CurvePoint, c: CurveParams) -> int:
    """Smallest ``s >= 1`` with ``G^s = P``."""
    s, cur = 1, G
    while True:
        if cur == P:
            return s
        if cur.is_infinity:
            raise NoLogarithm(f"{P} is not in the subgroup generated by {G}")
        cur = compose(cur, G, c)
        s += 1


def find_generator(c: CurveParams, order: int) -> CurvePoint:
    """First point (by x, then y) whose order is ``order``."""
    for pt in enumerate_points(c)[1:]:
        if point_pow(pt, order, c).is_infinity and point_order(pt, c) == order:
            return pt
    raise DomainError(f"no point of order {order} on {c}")


def preset(name: str) -> tuple[CurveParams, CurvePoint, int]:
    try:
        curve, order = PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown curve preset {name!r}; have {sorted(PRESETS)}") from None
    if name not in _GEN:
        _GEN[name] = _first_point(curve)
    return curve, _GEN[name], order


_GEN: dict[str, CurvePoint] = {}


def _first_point(c: CurveParams) -> CurvePoint:
    # for a prime-order group every affine point generates
    for x in range(c.p):
        rhs = (x**3 + c.a * x + c.b) % c.p
        if rhs == 0:
            return CurvePoint(x, 0)
        if pow(rhs, (c.p - 1) // 2, c.p) == 1:
            y = _sqrt_mod(rhs, c.p)
            return CurvePoint(x, min(y, c.p - y))
    raise DomainError("curve has no affine points")


def _sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks."""
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, cc, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(cc, 1 << (m - i - 1), p)
        m, cc, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


# -- Diffie-Hellman -----------------------------------------------------------

def ecdh_keypair(G: CurvePoint, order: int, c: CurveParams, rng):
    s = rng.randrange(1, order)
    return s, point_pow(G, s, c)


def ecdh_shared(my_private: int, their_public: CurvePoint, c: CurveParams) -> CurvePoint:
    if not on_curve(their_public, c):
        raise DomainError(f"public key {their_public} is not on the curve")
    if their_public.is_infinity:
        raise DomainError("public key is the neutral element")
    return point_pow(their_public, my_private, c)


# -- ECDSA --------------------------------------------------------------------

def ecdsa_sign(digest: int, private: int, G: CurvePoint, order: int, c: CurveParams, rng,
               _nonce=None) -> tuple[int, int]:
    """Textbook ECDSA.  ``_nonce`` lets tests inject nonce sequences."""
    z = digest % order
    nonces = iter(_nonce) if _nonce is not None else None
    while True:
        k = next(nonces) if nonces is not None else rng.randrange(1, order)
        R = point_pow(G, k, c)
        if R.is_infinity:
            continue
        r = R.x % order
        if r == 0:
            continue
        s = int(modnum.mod_inverse(k, order)) * (z + r * private) % order
        if s == 0:
            continue
        return r, s


def ecdsa_verify(digest: int, sig, public: CurvePoint, G: CurvePoint, order: int, c: CurveParams) -> bool:
    try:
        r, s = sig
        if not (0 < r < order and 0 < s < order):
            return False
        if public.is_infinity or not on_curve(public, c):
            return False
        w = int(modnum.mod_inverse(s, order))
        z = digest % order
        X = compose(point_pow(G, z * w % order, c), point_pow(public, r * w % order, c), c)
        return not X.is_infinity and X.x % order == r
    except (TypeError, ValueError):
        return False


# -- EC-ElGamal (reconstructed; only "m = x-coordinate of M" is given) -------

def embed_message(m: int, c: CurveParams, tries: int = 64) -> CurvePoint:
    """Try-and-increment: first x in ``m*tries + j`` that lies on the curve.

    Decoding is ``x // tries``.
    """
    for j in range(tries):
        x = m * tries + j
        if x >= c.p:
            break
        rhs = (x**3 + c.a * x + c.b) % c.p
        if rhs == 0:
            return CurvePoint(x, 0)
        if pow(rhs, (c.p - 1) // 2, c.p) == 1:
            return CurvePoint(x, _sqrt_mod(rhs, c.p))
    raise DomainError(f"cannot embed {m} into {c}")


def elgamal_encrypt(M: CurvePoint, public: CurvePoint, G: CurvePoint, order: int, c: CurveParams, rng):
    k = rng.randrange(1, order)
    return point_pow(G, k, c), compose(M, point_pow(public, k, c), c)


def elgamal_decrypt(ct, private: int, c: CurveParams) -> int:
    """Recovers M and returns its x-coordinate."""
    C1, C2 = ct
    M = compose(C2, inverse(point_pow(C1, private, c), c), c)
    if M.is_infinity:
        raise DomainError("decrypted to the neutral element")
    return M.x

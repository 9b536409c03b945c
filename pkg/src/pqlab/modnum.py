"""Exact integer number theory.

Everything here works on Python integers (arbitrary precision), so there is
no overflow to worry about.  The brute-force routines (``period``,
``discrete_log``, ``factorize``) are meant for desk-sized inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .errors import DomainError, NoLogarithm, NotInvertible, NotPeriodic


@dataclass(frozen=True, eq=False)
class Residue:
    """A value in ``[0, modulus)``.

    Compares equal to a plain ``int`` with the same value, so
    ``mod_reduce(-3, 7) == 4`` reads naturally.
    """

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise DomainError(f"{self.value} is not reduced mod {self.modulus}")

    def __int__(self):
        return self.value

    __index__ = __int__

    def __eq__(self, other):
        if isinstance(other, Residue):
            return (self.value, self.modulus) == (other.value, other.modulus)
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"Residue({self.value} mod {self.modulus})"


@dataclass(frozen=True)
class BezoutCertificate:
    g: int
    x: int
    y: int
    a: int
    b: int

    def holds(self) -> bool:
        return self.satisfied_by(self.x, self.y)

    def satisfied_by(self, x: int, y: int) -> bool:
        return self.a * x + self.b * y == self.g


@dataclass(frozen=True)
class Factorization:
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __str__(self):
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def _check_modulus(n: int) -> None:
    if n < 1:
        raise DomainError(f"modulus must be a positive integer, got {n}")


def mod_reduce(a: int, n: int) -> Residue:
    """``a - floor(a/n)*n``; always lands in ``[0, n)``, also for negative ``a``."""
    _check_modulus(n)
    return Residue(a - (a // n) * n, n)


def congruent(a: int, b: int, n: int) -> bool:
    _check_modulus(n)
    return mod_reduce(a, n) == mod_reduce(b, n)


def divides(n: int, m: int) -> bool:
    if n == 0:
        return m == 0
    return m % n == 0


def gcd(a: int, b: int) -> int:
    """Euclid's remainder chain r_{i+1} = r_{i-1} mod r_i."""
    if a < 0 or b < 0:
        raise DomainError("gcd expects nonnegative arguments")
    if a == 0 and b == 0:
        raise DomainError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a


def bezout(a: int, b: int) -> BezoutCertificate:
    """Extended Euclid: returns ``g = gcd(a, b)`` with ``a*x + b*y = g``."""
    g = gcd(a, b)
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_x, x = x, old_x - k * x
        old_y, y = y, old_y - k * y
    assert old_r == g
    return BezoutCertificate(g=g, x=old_x, y=old_y, a=a, b=b)


def mod_inverse(a: int, m: int) -> Residue:
    _check_modulus(m)
    a_red = int(mod_reduce(a, m))
    if m == 1:
        raise NotInvertible("no inverse modulo 1 in [1, m)")
    if a_red == 0:
        raise NotInvertible(f"{a} is not invertible mod {m}")
    cert = bezout(a_red, m)
    if cert.g != 1:
        raise NotInvertible(f"gcd({a}, {m}) = {cert.g}; no inverse")
    return mod_reduce(cert.x, m)


def mod_pow(a: int, x: int, n: int) -> Residue:
    """Square-and-multiply; every intermediate product is reduced mod ``n``."""
    _check_modulus(n)
    if x < 0:
        raise DomainError("negative exponent")
    result = 1 % n
    base = a % n
    while x:
        if x & 1:
            result = (result * base) % n
        base = (base * base) % n
        x >>= 1
    return Residue(result, n)


def period(a: int, n: int) -> int:
    """Smallest ``p >= 1`` with ``a**p = 1 (mod n)``, by repeated multiplication."""
    _check_modulus(n)
    if not 0 < a < n:
        raise DomainError(f"need 0 < a < n, got a={a}, n={n}")
    if gcd(a, n) != 1:
        raise NotPeriodic(f"a^x mod {n} is not periodic for a={a} (gcd != 1)")
    if n == 1:
        return 1
    p, cur = 1, a % n
    while cur != 1:
        cur = (cur * a) % n
        p += 1
    return p


def discrete_log(a: int, x: int, n: int) -> int:
    """Smallest ``y >= 0`` with ``a**y = x (mod n)``.

    Note ``discrete_log(a, 1, n) == 0``; the positive exponent reaching 1 is
    :func:`period`.
    """
    _check_modulus(n)
    if not 0 < a < n:
        raise DomainError(f"need 0 < a < n, got a={a}, n={n}")
    target = x % n
    seen = set()
    cur = 1 % n
    y = 0
    # the sequence a^y mod n is eventually periodic; stop at the first repeat
    while cur not in seen:
        if cur == target:
            return y
        seen.add(cur)
        cur = (cur * a) % n
        y += 1
    raise NoLogarithm(f"{x} is not a power of {a} modulo {n}")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def factorize(n: int) -> Factorization:
    """Trial division."""
    if n < 2:
        raise DomainError(f"factorize needs n >= 2, got {n}")
    out = []
    rest = n
    d = 2
    while d * d <= rest:
        if rest % d == 0:
            e = 0
            while rest % d == 0:
                rest //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if rest > 1:
        out.append((rest, 1))
    return Factorization(tuple(out))

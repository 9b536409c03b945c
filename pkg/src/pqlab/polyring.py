"""Polynomials over Z_q and the negacyclic ring R_q = Z_q[X]/(X^n + 1).

Coefficient tuples are always in ascending degree.  ``PolyZq`` with
``q=None`` is a polynomial over the integers (used for plain long division).

Products in R_q are schoolbook convolutions followed by the fold
``X^(n+j) -> -X^j``; for larger rings the convolution runs through numpy in
int64, which is exact as long as ``n * (q-1)^2`` stays below 2^62.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ParameterMismatch

_NUMPY_MIN_N = 32


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def centered(c: int, q: int) -> int:
    """Representative of ``c mod q`` in ``(-q/2, q/2]``."""
    c %= q
    return c - q if c > q // 2 else c


def round_half_up_half(q: int) -> int:
    """``q/2`` rounded to nearest, halves going up: 7 -> 4, 3329 -> 1665."""
    return (q + 1) // 2


def render(coeffs: Sequence[int], var: str = "x") -> str:
    """Descending-degree text form, e.g. ``3x^3+6x^2+6x+3``."""
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + var + ("" if i == 1 else f"^{i}")
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += sign + body
    return out


_TERM = re.compile(r"([+-]?)(\d*)(?:(x)(?:\^(\d+))?)?")


def parse_coeffs(text: str) -> list[int]:
    """Parse ``'6x^2 - 3x - 5'`` into ascending integer coefficients."""
    s = text.replace(" ", "").replace("X", "x").replace("−", "-")
    if s in ("", "0"):
        return []
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise DomainError(f"cannot parse polynomial {text!r} at {s[pos:]!r}")
        sign, num, x, exp = m.groups()
        if not num and not x:
            raise DomainError(f"cannot parse polynomial {text!r}")
        c = int(num) if num else 1
        if sign == "-":
            c = -c
        deg = (int(exp) if exp else 1) if x else 0
        coeffs[deg] = coeffs.get(deg, 0) + c
        pos = m.end()
    top = max(coeffs) if coeffs else -1
    return [coeffs.get(i, 0) for i in range(top + 1)]


# -- polynomials over Z_q (or Z) ----------------------------------------------

@dataclass(frozen=True)
class PolyZq:
    q: int | None
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.q is not None and self.q < 2:
            raise DomainError(f"modulus must be >= 2, got {self.q}")
        cs = self.coeffs if self.q is None else (c % self.q for c in self.coeffs)
        object.__setattr__(self, "coeffs", _trim(int(c) for c in cs))

    @classmethod
    def parse(cls, text: str, q: int | None) -> "PolyZq":
        return cls(q, tuple(parse_coeffs(text)))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self):
        return render(self.coeffs)

    def __add__(self, other):
        return poly_add(self, other)

    def __sub__(self, other):
        return poly_sub(self, other)

    def __mul__(self, other):
        return poly_mul(self, other)


def _same_q(p: PolyZq, r: PolyZq) -> int | None:
    if p.q != r.q:
        raise ParameterMismatch(f"modulus mismatch: {p.q} vs {r.q}")
    return p.q


def poly_add(p: PolyZq, r: PolyZq) -> PolyZq:
    q = _same_q(p, r)
    out = [a + b for a, b in itertools.zip_longest(p.coeffs, r.coeffs, fillvalue=0)]
    return PolyZq(q, tuple(out))


def poly_neg(p: PolyZq) -> PolyZq:
    return PolyZq(p.q, tuple(-c for c in p.coeffs))


def poly_sub(p: PolyZq, r: PolyZq) -> PolyZq:
    return poly_add(p, poly_neg(r))


def poly_mul(p: PolyZq, r: PolyZq) -> PolyZq:
    q = _same_q(p, r)
    if p.is_zero() or r.is_zero():
        return PolyZq(q, ())
    out = [0] * (len(p.coeffs) + len(r.coeffs) - 1)
    for j, a in enumerate(p.coeffs):
        if a:
            for k, b in enumerate(r.coeffs):
                out[j + k] += a * b
    return PolyZq(q, tuple(out))


def _lead_inverse(lead: int, q: int | None):
    if q is None:
        if lead not in (1, -1):
            return None
        return lead
    try:
        return pow(lead, -1, q)
    except ValueError:
        return None


def poly_divmod(p: PolyZq, f: PolyZq) -> tuple[PolyZq, PolyZq]:
    """Long division: ``p = quot*f + rem`` with ``deg rem < deg f``.

    Over the integers the divisor must be monic up to sign; over Z_q its
    leading coefficient must be a unit.
    """
    q = _same_q(p, f)
    if f.is_zero():
        raise DomainError("division by the zero polynomial")
    inv = _lead_inverse(f.coeffs[-1], q)
    if inv is None:
        raise DomainError(f"leading coefficient {f.coeffs[-1]} of the divisor is not invertible")
    rem = list(p.coeffs)
    df = f.degree
    quot = [0] * max(len(rem) - df, 0)
    for shift in range(len(rem) - 1 - df, -1, -1):
        c = rem[shift + df]
        if q is not None:
            c %= q
        if c == 0:
            continue
        factor = c * inv if q is None else (c * inv) % q
        quot[shift] = factor
        for i, fc in enumerate(f.coeffs):
            rem[shift + i] -= factor * fc
    return PolyZq(q, tuple(quot)), PolyZq(q, tuple(rem[:df] if df > 0 else ()))


def x_pow_n_plus_one(n: int, q: int | None) -> PolyZq:
    return PolyZq(q, (1,) + (0,) * (n - 1) + (1,))


# -- the negacyclic ring --------------------------------------------------------

@dataclass(frozen=True)
class RingElem:
    n: int
    q: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n:
            raise DomainError(f"ring element needs exactly {self.n} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(int(c) % self.q for c in self.coeffs))

    @classmethod
    def zero(cls, n: int, q: int) -> "RingElem":
        return cls(n, q, (0,) * n)

    @classmethod
    def one(cls, n: int, q: int) -> "RingElem":
        return cls(n, q, (1,) + (0,) * (n - 1))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], n: int, q: int) -> "RingElem":
        """Coefficients of any length; folded negacyclically into degree < n."""
        out = [0] * n
        for i, c in enumerate(coeffs):
            k, j = divmod(i, n)
            out[j] += -c if k % 2 else c
        return cls(n, q, tuple(out))

    @classmethod
    def parse(cls, text: str, n: int, q: int) -> "RingElem":
        return cls.from_coeffs(parse_coeffs(text), n, q)

    def centered(self) -> tuple[int, ...]:
        return tuple(centered(c, self.q) for c in self.coeffs)

    def inf_norm(self) -> int:
        return max((abs(c) for c in self.centered()), default=0)

    def to_poly(self) -> PolyZq:
        return PolyZq(self.q, self.coeffs)

    def __str__(self):
        return render(self.coeffs)

    def show(self, centered: bool = False) -> str:
        return render(self.centered() if centered else self.coeffs)

    def _check(self, other: "RingElem"):
        if self.n != other.n or self.q != other.q:
            raise ParameterMismatch(f"ring mismatch: (n={self.n}, q={self.q}) vs (n={other.n}, q={other.q})")

    def __add__(self, other):
        return ring_add(self, other)

    def __sub__(self, other):
        return ring_sub(self, other)

    def __neg__(self):
        return ring_neg(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElem(self.n, self.q, tuple(c * other for c in self.coeffs))
        return ring_mul(self, other)

    __rmul__ = __mul__


def _elem(n: int, q: int, coeffs: tuple) -> RingElem:
    # trusted constructor for results that are already reduced
    obj = object.__new__(RingElem)
    obj.__dict__.update(n=n, q=q, coeffs=coeffs)
    return obj


def reduce_negacyclic(p: PolyZq, n: int) -> RingElem:
    if p.q is None:
        raise DomainError("negacyclic reduction needs a coefficient modulus")
    return RingElem.from_coeffs(p.coeffs, n, p.q)


def ring_add(a: RingElem, b: RingElem) -> RingElem:
    a._check(b)
    q = a.q
    return _elem(a.n, q, tuple([(x + y) % q for x, y in zip(a.coeffs, b.coeffs)]))


def ring_neg(a: RingElem) -> RingElem:
    q = a.q
    return _elem(a.n, q, tuple([-x % q for x in a.coeffs]))


def ring_sub(a: RingElem, b: RingElem) -> RingElem:
    a._check(b)
    q = a.q
    return _elem(a.n, q, tuple([(x - y) % q for x, y in zip(a.coeffs, b.coeffs)]))


def ring_mul(a: RingElem, b: RingElem) -> RingElem:
    a._check(b)
    n, q = a.n, a.q
    if n >= _NUMPY_MIN_N and n * (q - 1) ** 2 < (1 << 62):
        full = np.convolve(np.asarray(a.coeffs, dtype=np.int64), np.asarray(b.coeffs, dtype=np.int64))
        low = full[:n].copy()
        low[: n - 1] -= full[n:]
        return _elem(n, q, tuple((low % q).tolist()))
    out = [0] * (2 * n)
    bc = b.coeffs
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(bc):
                out[i + j] += x * y
    return _elem(n, q, tuple([(out[k] - out[k + n]) % q for k in range(n)]))


def enumerate_ring(n: int, q: int):
    """Every element of R_q (only sensible for tiny n and q)."""
    for cs in itertools.product(range(q), repeat=n):
        yield RingElem(n, q, cs)


# -- module elements ---------------------------------------------------------

@dataclass(frozen=True)
class RingVec:
    entries: tuple[RingElem, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.entries:
            n, q = self.entries[0].n, self.entries[0].q
            for e in self.entries:
                if (e.n, e.q) != (n, q):
                    raise ParameterMismatch("vector entries must share (n, q)")

    @classmethod
    def zero(cls, k: int, n: int, q: int) -> "RingVec":
        return cls(tuple(RingElem.zero(n, q) for _ in range(k)))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def _check(self, other):
        if len(self) != len(other):
            raise ParameterMismatch(f"vector lengths differ: {len(self)} vs {len(other)}")

    def __add__(self, other):
        self._check(other)
        return RingVec(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        self._check(other)
        return RingVec(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return RingVec(tuple(-a for a in self))

    def scale(self, c: RingElem) -> "RingVec":
        return RingVec(tuple(c * a for a in self))

    def dot(self, other: "RingVec") -> RingElem:
        return dot(self, other)

    def inf_norm(self) -> int:
        return max((e.inf_norm() for e in self), default=0)

    def show(self, centered: bool = False) -> str:
        return "(" + ", ".join(e.show(centered) for e in self) + ")"


@dataclass(frozen=True)
class RingMat:
    rows: tuple[tuple[RingElem, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ParameterMismatch("ragged matrix")

    @classmethod
    def identity(cls, k: int, n: int, q: int) -> "RingMat":
        return cls(tuple(tuple(RingElem.one(n, q) if i == j else RingElem.zero(n, q) for j in range(k)) for i in range(k)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    @property
    def T(self) -> "RingMat":
        return transpose(self)

    def __matmul__(self, other):
        if isinstance(other, RingVec):
            return matvec(self, other)
        return matmul(self, other)


def dot(u: RingVec, v: RingVec) -> RingElem:
    u._check(v)
    if not len(u):
        raise DomainError("empty vectors")
    acc = u[0] * v[0]
    for a, b in zip(u.entries[1:], v.entries[1:]):
        acc = acc + a * b
    return acc


def transpose(A: RingMat) -> RingMat:
    return RingMat(tuple(zip(*A.rows)))


def matvec(A: RingMat, v: RingVec) -> RingVec:
    if A.shape[1] != len(v):
        raise ParameterMismatch(f"matrix {A.shape} times vector of length {len(v)}")
    return RingVec(tuple(dot(RingVec(row), v) for row in A.rows))


def matmul(A: RingMat, B: RingMat) -> RingMat:
    if A.shape[1] != B.shape[0]:
        raise ParameterMismatch(f"shapes {A.shape} and {B.shape} do not compose")
    cols = transpose(B).rows
    return RingMat(tuple(tuple(dot(RingVec(r), RingVec(c)) for c in cols) for r in A.rows))


# -- messages, scaling and rounding -----------------------------------------

def bits_to_poly(bits, n: int, q: int) -> RingElem:
    """Bit string to polynomial; the leftmost bit is the highest-degree coefficient.

    ``"1001"`` becomes ``x^3 + 1``.
    """
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise DomainError(f"not a bit string: {bits!r}")
        bits = [int(b) for b in bits]
    bits = list(bits)
    if len(bits) > n:
        raise DomainError(f"{len(bits)} bits do not fit into degree < {n}")
    if any(b not in (0, 1) for b in bits):
        raise DomainError("bits must be 0 or 1")
    coeffs = list(reversed(bits)) + [0] * (n - len(bits))
    return RingElem(n, q, tuple(coeffs))


def poly_to_bits(p: RingElem) -> str:
    """Inverse of :func:`bits_to_poly`, always ``n`` characters long."""
    if any(c not in (0, 1) for c in p.coeffs):
        raise DomainError("polynomial has non-binary coefficients")
    return "".join(str(c) for c in reversed(p.coeffs))


def bytes_to_bits(data: bytes) -> str:
    return "".join(f"{b:08b}" for b in data)


def bits_to_bytes(bits: str) -> bytes:
    if len(bits) % 8:
        raise DomainError("bit string length must be a multiple of 8")
    return bytes(int(bits[i:i + 8], 2) for i in range(0, len(bits), 8))


def scale_half_q(p: RingElem) -> RingElem:
    if any(c not in (0, 1) for c in p.coeffs):
        raise DomainError("scaling expects a 0/1 polynomial")
    h = round_half_up_half(p.q)
    return _elem(p.n, p.q, tuple([c * h for c in p.coeffs]))


def round_coefficient(c: int, q: int) -> int:
    """1 if ``c`` is at least as close (circularly) to round(q/2) as to 0."""
    c %= q
    h = round_half_up_half(q)
    d_half = min((c - h) % q, (h - c) % q)
    d_zero = min(c, q - c)
    return 1 if d_half <= d_zero else 0


@functools.lru_cache(maxsize=None)
def one_interval(q: int) -> tuple[int, int]:
    """``[lo, hi]``: the residues that :func:`round_coefficient` maps to 1.

    The predicate only switches once on each side of round(q/2), so both
    ends are found by bisection.
    """
    h = round_half_up_half(q)
    lo, hi = 0, h  # first c in [0, h] rounding to 1
    while lo < hi:
        mid = (lo + hi) // 2
        if round_coefficient(mid, q):
            hi = mid
        else:
            lo = mid + 1
    first = lo
    lo, hi = h, q - 1  # last c in [h, q) rounding to 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if round_coefficient(mid, q):
            lo = mid
        else:
            hi = mid - 1
    return first, lo


def round_coeffs(p: RingElem) -> RingElem:
    lo, hi = one_interval(p.q)
    return _elem(p.n, p.q, tuple([1 if lo <= c <= hi else 0 for c in p.coeffs]))


# -- canonical bytes -----------------------------------------------------------

def coeff_bits(q: int) -> int:
    return max(1, (q - 1).bit_length())


def pack_elem(p: RingElem) -> bytes:
    """Fixed-width little-endian packing, ascending degree."""
    w = coeff_bits(p.q)
    acc = 0
    for i, c in enumerate(p.coeffs):
        acc |= c << (i * w)
    return acc.to_bytes((p.n * w + 7) // 8, "little")


def packed_size(n: int, q: int) -> int:
    return (n * coeff_bits(q) + 7) // 8


def unpack_elem(data: bytes, n: int, q: int) -> RingElem:
    if len(data) != packed_size(n, q):
        raise DomainError(f"expected {packed_size(n, q)} bytes, got {len(data)}")
    w = coeff_bits(q)
    acc = int.from_bytes(data, "little")
    if acc >> (n * w):
        raise DomainError("nonzero padding bits")
    mask = (1 << w) - 1
    coeffs = [(acc >> (i * w)) & mask for i in range(n)]
    if any(c >= q for c in coeffs):
        raise DomainError(f"coefficient out of range for q={q}")
    return RingElem(n, q, tuple(coeffs))


def pack_vec(v: RingVec) -> bytes:
    return b"".join(pack_elem(e) for e in v)


def unpack_vec(data: bytes, k: int, n: int, q: int) -> RingVec:
    size = packed_size(n, q)
    if len(data) != k * size:
        raise DomainError(f"expected {k * size} bytes, got {len(data)}")
    return RingVec(tuple(unpack_elem(data[i * size:(i + 1) * size], n, q) for i in range(k)))

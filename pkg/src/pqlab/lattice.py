"""Integer lattices: bases, defect, brute-force SVP/CVP/SIVP, Babai rounding,
GGH and LWE.

A :class:`Basis` is an ordered list of basis vectors.  Read as the columns of
a matrix ``B`` the lattice is ``{B g : g integer}``; GGH reads the same
vectors as rows (``m B``).  Correctness paths use exact ``Fraction``
arithmetic; floats only appear in reported defect values.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import modnum
from .errors import DomainError, KeyGenError, Singular, Unsupported

Vector = tuple


def _num(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x))


def _norm2(v) -> Fraction:
    return sum((Fraction(x) * x for x in v), Fraction(0))


# -- exact linear algebra ---------------------------------------------------

def det(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return out


def inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return [row[n:] for row in m]


def matmul(A, B) -> list[list]:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def vecmat(v, M) -> tuple:
    """Row vector times matrix."""
    return tuple(sum(a * b for a, b in zip(v, col)) for col in zip(*M))


def _plain(x):
    return x.numerator if isinstance(x, Fraction) and x.denominator == 1 else x


# -- bases --------------------------------------------------------------------

@dataclass(frozen=True)
class Basis:
    vectors: tuple[tuple, ...]

    def __post_init__(self):
        vecs = tuple(tuple(_plain(_num(x)) for x in v) for v in self.vectors)
        n = len(vecs)
        if n == 0 or any(len(v) != n for v in vecs):
            raise DomainError("a basis needs n vectors of length n")
        object.__setattr__(self, "vectors", vecs)
        if det(vecs) == 0:
            raise Singular("basis vectors are linearly dependent")

    @property
    def n(self) -> int:
        return len(self.vectors)

    def rows(self) -> list[list]:
        return [list(v) for v in self.vectors]

    def columns(self) -> list[list]:
        return [list(c) for c in zip(*self.vectors)]

    def det(self) -> Fraction:
        return det(self.vectors)

    def combine(self, coeffs) -> tuple:
        """``sum_i coeffs[i] * v_i``."""
        return tuple(_plain(x) for x in vecmat(coeffs, self.vectors))

    def coordinates(self, x) -> tuple[Fraction, ...]:
        """``g`` with ``sum g_i v_i = x`` (exact)."""
        return vecmat([_num(c) for c in x], inverse(self.vectors))

    def contains(self, x) -> bool:
        return all(g.denominator == 1 for g in self.coordinates(x))

    def max_norm(self) -> float:
        return math.sqrt(max(_norm2(v) for v in self.vectors))

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in v) for v in self.vectors)


def parse_basis(text: str) -> Basis:
    """One whitespace-separated row of integers per basis vector."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append(tuple(int(t) for t in line.split()))
        except ValueError:
            raise DomainError(f"line {lineno}: expected integers, got {line!r}") from None
    return Basis(tuple(rows))


def defect(B: Basis) -> float:
    """``prod ||v_i|| / |det B|``; at least 1 by Hadamard's inequality."""
    d = B.det()
    prod = Fraction(1)
    for v in B.vectors:
        prod *= _norm2(v)
    return math.sqrt(prod / (d * d))


def same_lattice(B: Basis, C: Basis) -> bool:
    """Each basis expresses every vector of the other with integer coordinates."""
    return all(B.contains(v) for v in C.vectors) and all(C.contains(v) for v in B.vectors)


@dataclass(frozen=True)
class UnimodularMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        ent = tuple(tuple(int(x) for x in r) for r in self.entries)
        object.__setattr__(self, "entries", ent)
        if abs(det(ent)) != 1:
            raise DomainError("matrix is not unimodular (det != +-1)")

    @property
    def n(self) -> int:
        return len(self.entries)

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(tuple(tuple(int(x) for x in r) for r in inverse(self.entries)))

    @classmethod
    def identity(cls, n: int) -> "UnimodularMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def random_unimodular(n: int, rng, steps: int = 10) -> UnimodularMatrix:
    """Product of ``steps`` elementary row operations applied to the identity."""
    if n < 1 or steps < 0:
        raise DomainError("need n >= 1 and steps >= 0")
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        op = rng.randrange(3) if n > 1 else 2
        if op == 0:
            i, j = rng.sample(range(n), 2)
            k = rng.choice([-3, -2, -1, 1, 2, 3])
            m[i] = [a + k * b for a, b in zip(m[i], m[j])]
        elif op == 1:
            i, j = rng.sample(range(n), 2)
            m[i], m[j] = m[j], m[i]
        else:
            i = rng.randrange(n)
            m[i] = [-a for a in m[i]]
    return UnimodularMatrix(tuple(tuple(r) for r in m))


def transform_basis(B: Basis, U: UnimodularMatrix) -> Basis:
    """Columns of ``C = B U``, i.e. ``c_j = sum_i U[i][j] v_i``."""
    if U.n != B.n:
        raise DomainError(f"dimension mismatch: basis {B.n}, transform {U.n}")
    cols = B.columns()
    C = matmul(cols, U.entries)
    return Basis(tuple(zip(*C)))


# -- brute-force problems ---------------------------------------------------

def _box(n: int, M: int):
    return itertools.product(range(-M, M + 1), repeat=n)


def svp_bruteforce(B: Basis, M: int) -> tuple:
    """Shortest nonzero ``sum g_i v_i`` with every ``g_i`` in ``[-M, M]``.

    Exact relative to the box only.  Ties go to the lexicographically
    smallest coefficient vector.
    """
    if B.n > 4:
        raise Unsupported("brute-force SVP is limited to n <= 4")
    if M < 1:
        raise DomainError("coefficient bound must be >= 1")
    best = None
    for g in _box(B.n, M):
        if not any(g):
            continue
        v = B.combine(g)
        key = _norm2(v)
        if best is None or key < best[0]:
            best = (key, v)
    return best[1]


def cvp_bruteforce(B: Basis, w, M: int) -> tuple:
    """Lattice vector in the coefficient box closest to ``w``; same tie rule."""
    if B.n > 4:
        raise Unsupported("brute-force CVP is limited to n <= 4")
    if M < 1:
        raise DomainError("coefficient bound must be >= 1")
    w = [_num(x) for x in w]
    if len(w) != B.n:
        raise DomainError("target has the wrong dimension")
    best = None
    for g in _box(B.n, M):
        v = B.combine(g)
        key = _norm2([a - b for a, b in zip(v, w)])
        if best is None or key < best[0]:
            best = (key, v)
    return best[1]


def _canonical_sign(v) -> bool:
    first = next((x for x in v if x != 0), 0)
    return first > 0


def sivp_bruteforce(B: Basis) -> Basis:
    """Basis of successively shortest independent vectors (n <= 3).

    Every candidate shorter than the longest input vector is enumerated; the
    coefficient box is certified from the rows of ``B^-1``.  Candidates are
    taken greedily by norm; if the greedy pick spans only a sublattice the
    search falls back to the best spanning choice.
    """
    n = B.n
    if n > 3:
        raise Unsupported("SIVP is only supported for n <= 3")
    R2 = max(_norm2(v) for v in B.vectors)
    inv = inverse(B.vectors)  # g = x . inv, so |g_j| <= ||column j of inv|| * R
    bounds = []
    for col in zip(*inv):
        bounds.append(math.isqrt(math.floor(_norm2(col) * R2)) + 1)
    cands = []
    for g in itertools.product(*(range(-b, b + 1) for b in bounds)):
        v = B.combine(g)
        if not _canonical_sign(v):
            continue
        nv = _norm2(v)
        if nv <= R2:
            cands.append((nv, tuple(-_num(x) for x in v), v))
    cands.sort(key=lambda c: (c[0], c[1]))
    vecs = [c[2] for c in cands]
    target = abs(B.det())

    chosen: list = []
    for v in vecs:
        trial = chosen + [v]
        if _rank(trial) == len(trial):
            chosen = trial
            if len(chosen) == n:
                break
    if len(chosen) == n and abs(det(chosen)) == target:
        return Basis(tuple(chosen))
    for j in range(n - 1, len(vecs)):
        for rest in itertools.combinations(range(j), n - 1):
            pick = [vecs[i] for i in rest] + [vecs[j]]
            if abs(det(pick)) == target:
                pick.sort(key=lambda v: (_norm2(v), tuple(-_num(x) for x in v)))
                return Basis(tuple(pick))
    raise DomainError("no spanning set found among the enumerated vectors")


def _rank(vectors) -> int:
    m = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def babai_round(B: Basis, c) -> tuple:
    """Round the coordinates of ``c`` in ``B`` to integers and map back."""
    g = [round_half_up(x) for x in B.coordinates(c)]
    return B.combine(g)


# -- GGH (row convention: public = U B, ciphertext c = m public + e) ---------

@dataclass(frozen=True)
class GghKeys:
    private: Basis
    public: Basis
    transform: UnimodularMatrix


def ggh_keygen(good: Basis, U: UnimodularMatrix, max_defect: float = 1.2) -> GghKeys:
    if U.n != good.n:
        raise KeyGenError("dimension mismatch between basis and transform")
    dg = defect(good)
    if dg >= max_defect:
        raise KeyGenError(f"private basis defect {dg:.4f} is not below {max_defect}")
    pub = Basis(tuple(tuple(r) for r in matmul(U.entries, good.rows())))
    if defect(pub) <= dg:
        raise KeyGenError("transform did not make the public basis worse; draw another")
    return GghKeys(good, pub, U)


def ggh_encrypt(m, public: Basis, e) -> tuple:
    if len(m) != public.n or len(e) != public.n:
        raise DomainError("message and error must have dimension n")
    return tuple(a + _num(b) for a, b in zip(public.combine(m), e))


def ggh_decrypt(c, keys: GghKeys) -> tuple[int, ...]:
    """``round(c B^-1) U^-1``.  A wrong result is not detected."""
    mU = [round_half_up(x) for x in keys.private.coordinates(c)]
    return tuple(int(x) for x in vecmat(mU, keys.transform.inverse().entries))


def decryption_radius(good: Basis) -> Fraction:
    """Any error with ``||e||_inf`` strictly below this decrypts correctly."""
    inv = inverse(good.vectors)
    worst = max(sum(abs(x) for x in col) for col in zip(*inv))
    return 1 / (2 * worst)


def random_good_basis(n: int, rng, scale: int = 8, max_defect: float = 1.2) -> Basis:
    """Diagonally dominant integer basis with small defect."""
    while True:
        rows = [[(scale if i == j else 0) + rng.randint(-1, 1) for j in range(n)] for i in range(n)]
        try:
            B = Basis(tuple(map(tuple, rows)))
        except Singular:
            continue
        if defect(B) < max_defect:
            return B


# -- LWE ----------------------------------------------------------------------

@dataclass(frozen=True)
class LweInstance:
    n: int
    q: int
    A: tuple[tuple[int, ...], ...]
    s: tuple[int, ...]
    e: tuple[int, ...]
    t: tuple[int, ...]
    error_bound: int

    def __post_init__(self):
        if not modnum.is_prime(self.q):
            raise DomainError(f"q={self.q} is not prime")
        for i in range(self.n):
            lhs = (sum(a * x for a, x in zip(self.A[i], self.s)) + self.e[i]) % self.q
            if lhs != self.t[i] % self.q:
                raise DomainError("t != A s + e (mod q)")
        if any(abs(x) > self.error_bound for x in self.e):
            raise DomainError("error exceeds the declared bound")


def lwe_from(A, s, e, q: int) -> LweInstance:
    n = len(A)
    A = tuple(tuple(x % q for x in r) for r in A)
    t = tuple((sum(a * x for a, x in zip(A[i], s)) + e[i]) % q for i in range(n))
    return LweInstance(n, q, A, tuple(s), tuple(e), t, max((abs(x) for x in e), default=0))


def lwe_generate(n: int, q: int, error_bound: int, rng) -> LweInstance:
    A = [[rng.randrange(q) for _ in range(n)] for _ in range(n)]
    s = [rng.randrange(q) for _ in range(n)]
    e = [rng.randint(-error_bound, error_bound) for _ in range(n)]
    inst = lwe_from(A, s, e, q)
    return LweInstance(n, q, inst.A, inst.s, inst.e, inst.t, error_bound)


def lwe_embed(inst: LweInstance) -> tuple[list[list[int]], bool]:
    """``(A | E_n | -t)`` and whether ``(s, e, 1)`` lies in its kernel mod q."""
    n, q = inst.n, inst.q
    M = [list(inst.A[i]) + [int(i == j) for j in range(n)] + [(-inst.t[i]) % q] for i in range(n)]
    w = list(inst.s) + list(inst.e) + [1]
    ok = all(sum(a * x for a, x in zip(row, w)) % q == 0 for row in M)
    return M, ok


def gauss_solve(A, t, q: int) -> tuple[int, ...]:
    """The unique ``s`` with ``A s = t (mod q)``, by elimination over Z_q."""
    if not modnum.is_prime(q):
        raise DomainError(f"q={q} is not prime")
    n = len(A)
    m = [[x % q for x in A[i]] + [t[i] % q] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            raise Singular("matrix is singular mod q")
        m[c], m[piv] = m[piv], m[c]
        inv = pow(m[c][c], -1, q)
        m[c] = [x * inv % q for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [(a - f * b) % q for a, b in zip(m[r], m[c])]
    return tuple(m[i][n] for i in range(n))

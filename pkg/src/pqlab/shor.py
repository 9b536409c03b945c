"""Shor's factoring algorithm with the quantum register simulated exactly.

The quantum part is replaced by the exact distribution of the measured
``y``: after the oracle writes ``a^x mod n`` into the second register and
that register is measured with outcome ``beta``, the first register holds a
uniform superposition over ``{x : a^x = beta}``.  Its Fourier transform gives
``Prob(y | beta)``; mixing over ``beta`` gives ``Prob(y)``.  The classical
parts (gcd bookkeeping, continued fractions, divisor extraction) are real.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import modnum
from .errors import DomainError, GaveUp

# beyond this many (classes x register) cells the per-class FFT is skipped in
# favour of the geometric-sum evaluation
_DFT_BUDGET = 1 << 24


@dataclass(frozen=True)
class MeasurementDistribution:
    N: int
    probs: np.ndarray

    def __post_init__(self):
        if len(self.probs) != self.N:
            raise DomainError("probability vector must have N entries")

    def support(self, tol: float = 1e-12) -> list[int]:
        return [int(y) for y in np.flatnonzero(self.probs > tol)]


@dataclass(frozen=True)
class ContinuedFraction:
    quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]

    def __str__(self):
        q = self.quotients
        head = f"[{q[0]}" + (f"; {', '.join(map(str, q[1:]))}]" if len(q) > 1 else "]")
        convs = ", ".join(f"{g}/{h}" for g, h in self.convergents)
        return f"{head} -> {convs}"


@dataclass
class ShorAttempt:
    a: int
    outcome: str  # gcd-shortcut | no-period | odd-period | bad-gcd | success
    y: int | None = None
    cf: ContinuedFraction | None = None
    period: int | None = None
    gcds: tuple[int, int] | None = None
    divisor: int | None = None


@dataclass
class ShorTrace:
    n: int
    N: int | None = None
    attempts: list[ShorAttempt] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"n = {self.n}" + (f", N = {self.N}" if self.N else "")]
        for i, at in enumerate(self.attempts, 1):
            parts = [f"round {i}: a = {at.a}"]
            if at.y is not None:
                parts.append(f"y = {at.y}")
            if at.cf is not None:
                parts.append(f"cf = {at.cf}")
            if at.period is not None:
                parts.append(f"p = {at.period}")
            if at.gcds is not None:
                parts.append(f"gcd(a^(p/2)-1, n) = {at.gcds[0]}, gcd(a^(p/2)+1, n) = {at.gcds[1]}")
            parts.append(at.outcome + (f" -> {at.divisor}" if at.divisor else ""))
            out.append("; ".join(parts))
        return out


def register_size(n: int) -> int:
    """The power of two ``N`` with ``n^2 <= N < 2 n^2``."""
    if n < 2:
        raise DomainError("n must be at least 2")
    N = 1
    while N < n * n:
        N <<= 1
    return N


def value_table(a: int, n: int, N: int) -> np.ndarray:
    """``a^x mod n`` for ``x = 0 .. N-1``.

    Computed up to the first repeat, then tiled; that is the same table an
    oracle would produce, just cheaper to materialise.
    """
    row = [1 % n]
    cur = a % n
    while cur != row[0] and len(row) < N:
        row.append(cur)
        cur = (cur * a) % n
    return np.resize(np.asarray(row, dtype=np.int64), N)


def class_distribution_dft(table: np.ndarray, beta: int) -> tuple[np.ndarray, int]:
    """``Prob(y | beta)`` by Fourier-transforming the post-measurement state."""
    N = len(table)
    mask = (table == beta).astype(np.complex128)
    A = int(mask.real.sum())
    if A == 0:
        raise DomainError(f"{beta} never occurs in the value table")
    # QFT uses exp(+2 pi i xy/N); |.|^2 is the same for either sign
    amp = np.fft.fft(mask)
    return (np.abs(amp) ** 2) / (N * A), A


def geometric_class_distribution(N: int, p: int, A: int) -> np.ndarray:
    """``Prob(y) = |(1 - q^A) / (1 - q)|^2 / (N A)`` with ``q = exp(2 pi i p y / N)``."""
    y = np.arange(N)
    theta = 2 * np.pi * ((p * y) % N) / N
    half = np.sin(theta / 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(np.abs(half) < 1e-12, float(A * A), (np.sin(A * theta / 2) / half) ** 2)
    return ratio / (N * A)


def simulate_quantum_part(a: int, n: int, method: str = "auto") -> MeasurementDistribution:
    """Exact distribution of the measured first register.

    ``method="dft"`` Fourier-transforms every residue class of the value
    table; ``"geometric"`` evaluates the closed geometric sum per class (using
    that each class is an arithmetic progression with step equal to the
    table's repeat length); ``"auto"`` picks the DFT when it is affordable.
    """
    if not 1 < a < n:
        raise DomainError(f"need 1 < a < n, got a={a}, n={n}")
    if modnum.gcd(a, n) != 1:
        raise DomainError(f"gcd({a}, {n}) != 1")
    N = register_size(n)
    table = value_table(a, n, N)
    classes, counts = np.unique(table, return_counts=True)
    if method == "auto":
        method = "dft" if len(classes) * N <= _DFT_BUDGET else "geometric"
    probs = np.zeros(N)
    if method == "dft":
        for beta, A in zip(classes, counts):
            cond, _ = class_distribution_dft(table, int(beta))
            probs += (A / N) * cond
    elif method == "geometric":
        step = len(classes)
        for A in np.unique(counts):
            weight = np.count_nonzero(counts == A) * A / N
            probs += weight * geometric_class_distribution(N, step, int(A))
    else:
        raise DomainError(f"unknown method {method!r}")
    return MeasurementDistribution(N, probs)


def sample_measurement(dist: MeasurementDistribution, rng) -> int:
    cdf = np.cumsum(dist.probs)
    u = rng.random() * cdf[-1]
    return min(int(np.searchsorted(cdf, u, side="right")), dist.N - 1)


def continued_fraction(y: int, N: int) -> ContinuedFraction:
    if y < 0 or N < 1:
        raise DomainError("need y >= 0 and N >= 1")
    quotients = []
    num, den = y, N
    while den:
        k = num // den
        quotients.append(k)
        num, den = den, num - k * den
    convergents = []
    h_prev, h = 1, quotients[0]
    k_prev, k = 0, 1
    convergents.append((h, k))
    for aq in quotients[1:]:
        h_prev, h = h, aq * h + h_prev
        k_prev, k = k, aq * k + k_prev
        convergents.append((h, k))
    assert Fraction(*convergents[-1]) == Fraction(y, N)
    return ContinuedFraction(tuple(quotients), tuple(convergents))


def _reduce_to_order(a: int, m: int, n: int) -> int:
    """Shrink a known multiple ``m`` of the order of ``a`` to the order itself."""
    for p, _ in modnum.factorize(m).factors if m > 1 else ():
        while m % p == 0 and int(modnum.mod_pow(a, m // p, n)) == 1:
            m //= p
    return m


def recover_period(y: int, N: int, a: int, n: int, max_multiple: int = 4) -> int | None:
    """Period candidate from the convergents of ``y/N``, verified by ``a^p = 1``.

    Each denominator ``h > 1`` is tried together with ``2h .. max_multiple*h``
    since ``y/N`` may approximate ``k/p`` with ``gcd(k, p) > 1``.  A verified
    candidate is reduced to the true order before it is returned.
    """
    if y == 0:
        return None
    cf = continued_fraction(y, N)
    tried = set()
    for _, h in cf.convergents:
        mults = range(1, 2) if h == 1 else range(1, max_multiple + 1)
        for c in mults:
            cand = c * h
            if cand in tried or cand >= n:
                continue
            tried.add(cand)
            if int(modnum.mod_pow(a, cand, n)) == 1:
                return _reduce_to_order(a, cand, n)
    return None


def shor_factor(n: int, rng, max_rounds: int = 64, method: str = "auto") -> tuple[int, ShorTrace]:
    """A proper divisor of ``n`` together with the trace of every round."""
    if n < 3:
        raise DomainError("n must be at least 3")
    trace = ShorTrace(n)
    if n % 2 == 0:
        trace.attempts.append(ShorAttempt(a=2, outcome="gcd-shortcut", divisor=2))
        return 2, trace
    trace.N = register_size(n)
    cache: dict[int, MeasurementDistribution] = {}
    for _ in range(max_rounds):
        a = rng.randrange(2, n)
        g = modnum.gcd(a, n)
        if g != 1:
            trace.attempts.append(ShorAttempt(a=a, outcome="gcd-shortcut", divisor=g))
            return g, trace
        if a not in cache:
            cache[a] = simulate_quantum_part(a, n, method)
        y = sample_measurement(cache[a], rng)
        attempt = ShorAttempt(a=a, outcome="no-period", y=y, cf=continued_fraction(y, trace.N))
        trace.attempts.append(attempt)
        p = recover_period(y, trace.N, a, n)
        if p is None:
            continue
        attempt.period = p
        if p % 2:
            attempt.outcome = "odd-period"
            continue
        half = int(modnum.mod_pow(a, p // 2, n))
        g1, g2 = modnum.gcd((half - 1) % n, n), modnum.gcd((half + 1) % n, n)
        attempt.gcds = (g1, g2)
        for d in (g1, g2):
            if 1 < d < n:
                attempt.outcome = "success"
                attempt.divisor = d
                return d, trace
        attempt.outcome = "bad-gcd"
    raise GaveUp(f"no divisor of {n} after {max_rounds} rounds", trace)


"""Exact number theory: Bernoulli numbers, valuations, divisor sums.

Rationals are :class:`fractions.Fraction` throughout; integers are plain
Python ints.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

INF = math.inf

_bern_lock = threading.Lock()
_bern_table: list[Fraction] = [Fraction(1)]


def bernoulli(m: int) -> Fraction:
    """Return B_m with the convention B_1 = -1/2.

    Uses sum_{k=0}^{m} C(m+1, k) B_k = 0, memoized.
    """
    if m < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if m < len(_bern_table):
        return _bern_table[m]
    with _bern_lock:
        table = _bern_table
        for n in range(len(table), m + 1):
            if n > 1 and n % 2 == 1:
                table.append(Fraction(0))
                continue
            s = sum(comb(n + 1, k) * table[k] for k in range(n) if table[k])
            table.append(-s / (n + 1))
        return table[m]


def nu_p(x, p: int):
    """p-adic valuation of an int or Fraction; ``math.inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return _nu_int(x.numerator, p) - _nu_int(x.denominator, p)


def _nu_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n| in increasing order."""
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def sigma(k: int, n: int) -> int:
    """Sum of k-th powers of the positive divisors of n."""
    if n < 1:
        raise ValueError("sigma needs n >= 1")
    total = 0
    r = math.isqrt(n)
    for d in range(1, r + 1):
        if n % d == 0:
            e = n // d
            total += d**k
            if e != d:
                total += e**k
    return total


def sigma_table(k: int, n_max: int) -> list[int]:
    """[sigma_k(0)=0, sigma_k(1), ..., sigma_k(n_max)] by a divisor sieve."""
    out = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dk = d**k
        for m in range(d, n_max + 1, d):
            out[m] += dk
    return out


@dataclass(frozen=True)
class VonStaudtReport:
    k: int
    denominator: int
    primes: tuple[int, ...]
    passed: bool


def clausen_von_staudt_check(k: int) -> VonStaudtReport:
    """Compare den(B_k) with the product of primes q such that (q-1) | k."""
    if k < 2 or k % 2:
        raise ValueError("k must be even and >= 2")
    den = bernoulli(k).denominator
    primes = tuple(q for q in range(2, k + 2) if k % (q - 1) == 0 and is_prime(q))
    return VonStaudtReport(k, den, primes, math.prod(primes) == den)


def alpha_order(t: int, p: int) -> int:
    """The p-part of den(B_t / t), cross-checked against p^(nu_p(t/(p-1)) + 1)."""
    if t <= 0 or t % 2:
        raise ValueError("t must be positive and even")
    if t % (p - 1):
        raise ValueError(f"{p - 1} does not divide {t}")
    ratio = bernoulli(t) / t
    e = -nu_p(ratio, p)
    expected = _nu_int(t // (p - 1), p) + 1
    if e != expected:
        raise ArithmeticError(f"alpha order mismatch at t={t}, p={p}: {e} != {expected}")
    return p**e


def is_primitive_root(g: int, p: int) -> bool:
    if g % p == 0:
        return False
    order = p - 1
    return all(pow(g, order // q, p) != 1 for q in prime_factors(order))


def is_topological_generator(ell: int, p: int) -> bool:
    """True when ell generates Z_p^x topologically (p odd)."""
    return (
        is_prime(ell)
        and ell != p
        and is_primitive_root(ell, p)
        and nu_p(pow(ell, p - 1) - 1, p) == 1
    )


def topological_generators(p: int, candidates=None, count: int | None = None) -> list[int]:
    """Primes from ``candidates`` (default: primes below 100) generating Z_p^x."""
    if candidates is None:
        candidates = [q for q in range(2, 100) if is_prime(q)]
    out = [q for q in candidates if is_topological_generator(q, p)]
    return out if count is None else out[:count]


@dataclass(frozen=True)
class PrimeContext:
    """A prime p >= 5 together with the auxiliary levels used against it."""

    p: int
    ell: int
    ell_alternates: tuple[int, ...] = ()
    precision_policy: str = "sturm"

    def __post_init__(self):
        if self.p < 5 or not is_prime(self.p):
            raise ValueError(f"p must be a prime >= 5, got {self.p}")
        for q in (self.ell, *self.ell_alternates):
            if not is_topological_generator(q, self.p):
                raise ValueError(f"{q} is not a topological generator of Z_{self.p}^x")

    @property
    def ells(self) -> tuple[int, ...]:
        return (self.ell, *self.ell_alternates)

    def with_ell(self, ell: int) -> "PrimeContext":
        rest = tuple(q for q in self.ells if q != ell)
        return PrimeContext(self.p, ell, rest, self.precision_policy)

"""Exponential sums and elementary multiplicative machinery.

Kloosterman sums are evaluated by direct summation over units with the
phase numerator reduced exactly in integer arithmetic before any float
conversion, so no precision is lost at large moduli.  Desk scale keeps
moduli in the 1e4..1e5 range where O(c) per sum is perfectly adequate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError, InternalMismatch, NotInvertible

_TWO_PI = 2.0 * math.pi

# Bernoulli numbers B_2, B_4, ..., B_12 for Euler-Maclaurin
_BERNOULLI = [1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730]


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")
        if not 0 <= self.value < self.modulus:
            raise ValueError("residue not reduced")


def mod_inverse(a: int, c: int) -> Residue:
    """Inverse of a modulo c; NotInvertible when gcd(a, c) > 1."""
    if c < 1:
        raise ValueError("modulus must be >= 1")
    if c == 1:
        return Residue(0, 1)
    try:
        return Residue(pow(a, -1, c), c)
    except ValueError as exc:
        raise NotInvertible(f"{a} has no inverse mod {c}") from exc


@lru_cache(maxsize=512)
def _units_and_inverses(c: int):
    """Arrays of units mod c and their inverses, cached per modulus."""
    h = np.arange(1, c, dtype=np.int64)
    units = h[np.gcd(h, c) == 1]
    inv = np.fromiter((pow(int(u), -1, c) for u in units),
                      dtype=np.int64, count=len(units))
    return units, inv


def kloosterman(n: int, m: int, c: int) -> float:
    """S(n, m; c) = sum over units h of e((n h + m h^{-1})/c).

    The sum is real; the imaginary residual is asserted below 1e-9 and
    discarded.
    """
    if c < 1:
        raise ValueError("modulus must be >= 1")
    if c == 1:
        return 1.0
    units, inv = _units_and_inverses(c)
    r = (n * units + m * inv) % c
    ang = (_TWO_PI / c) * r
    re = float(np.sum(np.cos(ang)))
    im = float(np.sum(np.sin(ang)))
    if abs(im) > 1e-9:
        raise InternalMismatch(f"S({n},{m};{c}) imaginary part {im:.2e}")
    return re


def kloosterman_row(ns: np.ndarray, m: int, c: int) -> np.ndarray:
    """S(n, m; c) for an array of n at one modulus, vectorized over units."""
    if c == 1:
        return np.ones(len(ns))
    units, inv = _units_and_inverses(c)
    r = (np.asarray(ns, dtype=np.int64)[:, None] * units[None, :]
         + m * inv[None, :]) % c
    return np.cos((_TWO_PI / c) * r).sum(axis=1)


def ramanujan_sum(m: int, c: int) -> float:
    """S(0, m; c), computed both as the unit e-sum and as the divisor-Moebius
    convolution sum_{d | (m, c)} d mu(c/d); the two must agree."""
    if c < 1:
        raise ValueError("modulus must be >= 1")
    if c == 1:
        return 1.0
    units, _ = _units_and_inverses(c)
    r = (m * units) % c
    esum = float(np.sum(np.cos((_TWO_PI / c) * r)))
    g = math.gcd(abs(m), c) if m != 0 else c
    exact = sum(d * moebius(c // d) for d in divisors(g))
    if abs(esum - exact) > 1e-6 * max(1.0, math.sqrt(c)):
        raise InternalMismatch(
            f"ramanujan sum paths disagree at (m={m}, c={c}): {esum} vs {exact}")
    return float(exact)


def twisted_factorization_check(n: int, m: int, c: int, q: int) -> bool:
    """Check S(nq, m; cq) = -S(n q^{-1}, m; c) for prime q with (c,q)=(m,q)=1
    by independent brute evaluation of both sides."""
    if math.gcd(c, q) != 1 or math.gcd(m, q) != 1:
        raise ValueError("requires (c, q) = (m, q) = 1")
    lhs = kloosterman(n * q, m, c * q)
    if c == 1:
        rhs = -1.0
    else:
        qbar = pow(q, -1, c)
        rhs = -kloosterman(n * qbar, m, c)
    return abs(lhs - rhs) <= 1e-7 * max(1.0, abs(lhs), abs(rhs))


class MultiplicativeTables:
    """Sieve-built d(n), mu(n) tables with a gcd helper."""

    MAX_X = 10 ** 8

    def __init__(self, x: int):
        if x > self.MAX_X:
            raise CapacityError(f"table size {x} exceeds {self.MAX_X}")
        if x < 1:
            raise ValueError("table size must be >= 1")
        self.x = x
        d = np.zeros(x + 1, dtype=np.int32)
        for i in range(1, x + 1):
            d[i::i] += 1
        self.d = d
        mu = np.ones(x + 1, dtype=np.int8)
        is_prime = np.ones(x + 1, dtype=bool)
        is_prime[:2] = False
        for p in range(2, x + 1):
            if not is_prime[p]:
                continue
            if p * p <= x:
                is_prime[p * p::p] = False
            mu[p::p] *= -1
            if p * p <= x:
                mu[p * p::p * p] = 0
        mu[0] = 0
        self.mu = mu
        self._is_prime = is_prime

    def gcd(self, a: int, b: int) -> int:
        return math.gcd(a, b)

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self._is_prime)


@lru_cache(maxsize=8)
def tables(x: int) -> MultiplicativeTables:
    return MultiplicativeTables(x)


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius needs n >= 1")
    mu = 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            mu = -mu
        p += 1
    if m > 1:
        mu = -mu
    return mu


def divisor_count(n: int) -> int:
    return len(divisors(n))


def zeta_value(s: float, n_terms: int = 50) -> float:
    """Riemann zeta for real s > 1 by Euler-Maclaurin, accurate to ~1e-14."""
    if s <= 1:
        raise DomainError("zeta_value requires s > 1")
    n = n_terms
    head = math.fsum(k ** -s for k in range(1, n))
    total = head + n ** (1 - s) / (s - 1) + 0.5 * n ** -s
    # correction terms B_{2j}/(2j)! * (s)_{2j-1} n^{-s-2j+1}
    poch = s
    fact = 1.0
    for j, b in enumerate(_BERNOULLI, start=1):
        fact *= (2 * j - 1) * (2 * j)
        total += b / fact * poch * n ** (-s - 2 * j + 1)
        poch *= (s + 2 * j - 1) * (s + 2 * j)
    return total

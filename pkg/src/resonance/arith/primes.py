"""Prime sieve and small multiplicative helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from resonance.errors import EmptyDomainError


@dataclass(frozen=True)
class PrimeTable:
    """Sorted primes up to ``limit``.

    Attributes:
        limit: Sieve bound (inclusive).
        primes: Increasing int64 array of all primes ``<= limit``.
    """

    limit: int
    primes: np.ndarray = field(repr=False)

    def __len__(self):
        return int(self.primes.size)

    def __iter__(self):
        return iter(self.primes.tolist())

    def count_upto(self, x: float) -> int:
        """Return pi(x) for ``x <= limit``."""
        return int(np.searchsorted(self.primes, np.floor(x), side="right"))

    def between(self, lo: float, hi: float) -> np.ndarray:
        """Primes ``p`` with ``lo <= p <= hi``."""
        i = np.searchsorted(self.primes, np.ceil(lo), side="left")
        j = np.searchsorted(self.primes, np.floor(hi), side="right")
        return self.primes[i:j]


def sieve_primes(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes on odd numbers.

    Args:
        limit: Upper bound, at least 2.

    Returns:
        A :class:`PrimeTable` holding every prime ``<= limit``.
    """
    limit = int(limit)
    if limit < 2:
        raise EmptyDomainError(f"no primes up to {limit}")
    # index i of `odd` stands for 2*i + 1
    odd = np.ones((limit + 1) // 2, dtype=bool)
    odd[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2 :: p] = False
    primes = np.concatenate(([2], 2 * np.nonzero(odd)[0] + 1)).astype(np.int64)
    return PrimeTable(limit, primes[primes <= limit])


@lru_cache(maxsize=8)
def _cached_sieve(limit: int) -> PrimeTable:
    return sieve_primes(limit)


def primes_upto(limit: float) -> np.ndarray:
    """Primes ``<= limit`` from a shared cached sieve (empty if ``limit < 2``)."""
    limit = int(np.floor(limit))
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    # round the sieve size up so nearby requests share one table
    size = 1 << max(10, (limit - 1).bit_length())
    table = _cached_sieve(size)
    return table.primes[: table.count_upto(limit)]


def primes_between(lo: float, hi: float) -> np.ndarray:
    """Primes in the closed interval ``[lo, hi]``."""
    ps = primes_upto(hi)
    return ps[ps >= lo]


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorisation for the small moduli used by characters."""
    n = int(n)
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power_decomposition(ns: np.ndarray, primes: np.ndarray | None = None):
    """Identify prime powers among ``ns``.

    Args:
        ns: Positive integers.
        primes: Optional primes covering ``max(ns)``.

    Returns:
        ``(base, exponent)`` int arrays; both are 0 where ``n`` is not a
        prime power.
    """
    ns = np.asarray(ns, dtype=np.int64)
    base = np.zeros_like(ns)
    expo = np.zeros_like(ns)
    if ns.size == 0:
        return base, expo
    top = int(ns.max())
    if primes is None:
        primes = primes_upto(top)
    lookup = {}
    for p in primes.tolist():
        pk, k = p, 1
        while pk <= top:
            lookup[pk] = (p, k)
            pk *= p
            k += 1
    for i, n in enumerate(ns.tolist()):
        hit = lookup.get(n)
        if hit is not None:
            base[i], expo[i] = hit
    return base, expo

"""Prime sieve, Moebius table and exact Bernoulli numbers."""
from __future__ import annotations

import threading
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb, isqrt
from typing import List

import numpy as np

from .mp_core import UsageError

__all__ = [
    "BernoulliCache",
    "DEFAULT_BERNOULLI",
    "SieveTables",
    "bernoulli",
    "build_sieve",
    "shared_sieve",
]

MAX_SIEVE_LIMIT = 10**9


class SieveTables:
    """Primality flags for 0..limit and the Moebius function on 1..limit.

    The Moebius table is built on first access; the prime flags are built
    eagerly.
    """

    def __init__(self, limit: int, is_prime: np.ndarray):
        self.limit = limit
        self.is_prime = is_prime
        self.is_prime.flags.writeable = False

    def __repr__(self) -> str:
        return f"SieveTables(limit={self.limit})"

    def primes(self, start: int = 2, stop: int | None = None) -> np.ndarray:
        """Primes p with start <= p <= stop (stop defaults to the limit)."""
        stop = self.limit if stop is None else min(stop, self.limit)
        idx = np.flatnonzero(self.is_prime[start : stop + 1])
        return idx + start

    @cached_property
    def moebius(self) -> np.ndarray:
        n = self.limit
        mu = np.ones(n + 1, dtype=np.int8)
        mu[0] = 0
        # product of the distinct primes <= sqrt(n) dividing each index
        small = np.ones(n + 1, dtype=np.int64 if n >= 2**31 else np.int32)
        for p in self.primes(2, isqrt(n)):
            p = int(p)
            mu[::p] *= -1
            mu[:: p * p] = 0
            small[::p] *= p
        # any leftover cofactor is a single prime > sqrt(n)
        big = small[1:] != np.arange(1, n + 1, dtype=small.dtype)
        mu[1:][big] *= -1
        mu.flags.writeable = False
        return mu

    def mu(self, k: int) -> int:
        if not 1 <= k <= self.limit:
            raise UsageError(f"moebius index {k} outside [1, {self.limit}]")
        return int(self.moebius[k])


def build_sieve(limit: int) -> SieveTables:
    if not 2 <= limit <= MAX_SIEVE_LIMIT:
        raise UsageError(f"sieve limit must be in [2, {MAX_SIEVE_LIMIT}], got {limit}")
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return SieveTables(limit, flags)


@lru_cache(maxsize=4)
def _sieve_at(size: int) -> SieveTables:
    return build_sieve(size)


def shared_sieve(limit: int) -> SieveTables:
    """A cached sieve covering at least ``limit``.

    Sizes are rounded up to a power of two so repeated small requests share
    one table.
    """
    size = max(64, 1 << (max(limit, 2) - 1).bit_length())
    return _sieve_at(min(max(size, limit), MAX_SIEVE_LIMIT))


class BernoulliCache:
    """Memoized exact Bernoulli numbers, grown geometrically on demand.

    Only even-index values are stored; B_1 = -1/2 and the odd values vanish.
    Growth is serialized by a lock; reading an existing entry takes no lock.
    """

    def __init__(self, max_index: int = 32):
        self._even: List[Fraction] = [Fraction(1)]
        self._lock = threading.Lock()
        self._extend(max_index)

    @property
    def max_index(self) -> int:
        return 2 * (len(self._even) - 1)

    def _extend(self, index: int) -> None:
        with self._lock:
            even = list(self._even)
            target = index // 2
            for m in range(len(even), target + 1):
                n = 2 * m
                # sum_{j=0}^{n} C(n+1, j) B_j = 0 with B_1 = -1/2, odd B_j = 0
                s = Fraction(-(n + 1), 2)
                for j in range(m):
                    s += comb(n + 1, 2 * j) * even[j]
                even.append(-s / (n + 1))
            self._even = even

    def get(self, index: int) -> Fraction:
        if index < 0:
            raise UsageError("Bernoulli index must be nonnegative")
        if index == 1:
            return Fraction(-1, 2)
        if index % 2:
            return Fraction(0)
        even = self._even
        if index // 2 >= len(even):
            self._extend(max(index, 2 * self.max_index))
            even = self._even
        return even[index // 2]


DEFAULT_BERNOULLI = BernoulliCache()


def bernoulli(index: int, cache: BernoulliCache = DEFAULT_BERNOULLI) -> Fraction:
    """Exact B_index (first convention, B_1 = -1/2).

    >>> bernoulli(2), bernoulli(4)
    (Fraction(1, 6), Fraction(-1, 30))
    """
    return cache.get(index)

"""Exact integer number theory used by every other module.

All routines operate on Python ints (arbitrary precision) and never touch
floating point.
"""

from __future__ import annotations

import math
from functools import lru_cache

import gmpy2

__all__ = [
    "FactorLeak",
    "gcd",
    "mod_inverse",
    "pow_mod",
    "integer_kth_root",
    "ceil_kth_root",
    "perfect_power",
    "small_primes",
    "trial_division",
    "is_prime_oracle",
]


class FactorLeak(ArithmeticError):
    """Raised when a coprimality check unexpectedly exposes a divisor of N.

    ``factor`` is a nontrivial divisor (1 < factor < modulus).
    """

    def __init__(self, factor: int, modulus: int, context: str = ""):
        self.factor = factor
        self.modulus = modulus
        self.context = context
        msg = f"gcd check exposed factor {factor} of {modulus}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


def gcd(a: int, b: int) -> int:
    """Greatest common divisor; ``gcd(0, 0) == 0``."""
    return math.gcd(a, b)


def mod_inverse(a: int, n: int) -> int | None:
    """Return x in [1, n-1] with a*x = 1 (mod n), or None if gcd(a, n) != 1."""
    if n < 2:
        raise ValueError("modulus must be at least 2")
    try:
        return pow(a, -1, n)
    except ValueError:
        return None


def pow_mod(base: int, exp: int, n: int) -> int:
    if n < 1:
        raise ValueError("modulus must be positive")
    if exp < 0:
        raise ValueError("negative exponent")
    return pow(base, exp, n)


def integer_kth_root(n: int, k: int) -> int:
    """Floor of the real k-th root of n, computed exactly.

    The result r satisfies r**k <= n < (r+1)**k.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if n < 0:
        raise ValueError("n must be non-negative")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    # Bracket the root by bit length, then bisect on exact powers.
    lo = 1 << ((n.bit_length() - 1) // k)
    hi = lo << 1
    while lo < hi - 1:
        mid = (lo + hi) >> 1
        if mid**k <= n:
            lo = mid
        else:
            hi = mid
    return lo


def ceil_kth_root(n: int, k: int) -> int:
    """Smallest r with r**k >= n."""
    r = integer_kth_root(n, k)
    return r if r**k == n else r + 1


def perfect_power(n: int) -> tuple[int, int] | None:
    """Return (b, e) with b**e == n and e >= 2 maximal, else None."""
    if n < 2:
        raise ValueError("n must be at least 2")
    for e in range(n.bit_length(), 1, -1):
        b = integer_kth_root(n, e)
        if b > 1 and b**e == n:
            return b, e
    return None


@lru_cache(maxsize=16)
def small_primes(limit: int) -> tuple[int, ...]:
    """Primes <= limit by a plain sieve of Eratosthenes."""
    if limit < 2:
        return ()
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def trial_division(n: int, bound: int) -> tuple[list[int], int]:
    """Strip every prime factor <= bound from n.

    Returns (factors, cofactor) where factors is sorted with multiplicity and
    the cofactor has no prime factor <= bound.
    """
    if n < 1:
        raise ValueError("n must be positive")
    factors: list[int] = []
    for p in small_primes(bound):
        if p * p > n:
            break
        while n % p == 0:
            factors.append(p)
            n //= p
    # Whatever is left is 1, a prime, or has all prime factors > sqrt-scan.
    if 1 < n <= bound:
        factors.append(n)
        n = 1
    return factors, n


# Deterministic Miller-Rabin: the first 13 primes as witnesses are correct
# for every n < 3317044064679887385961981.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime_oracle(n: int) -> bool:
    """Reference primality test for assertions and leaf certification.

    Deterministic below 3.3e24; above that falls back to BPSW, which has no
    known counterexample.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _MR_LIMIT:
        return all(_strong_probable_prime(n, a) for a in _MR_BASES)
    return bool(gmpy2.is_bpsw_prp(n))

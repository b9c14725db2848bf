"""Small integer number theory helpers built on sympy."""

from functools import lru_cache
from math import gcd

import numpy as np
from sympy import factorint, isprime

from .errors import NonPrimePowerQ

__all__ = ["gcd", "isprime", "factorint", "prime_factors", "prime_power", "prime_powers_upto", "lcm"]


@lru_cache(maxsize=4096)
def prime_factors(n):
    return tuple(sorted(factorint(n)))


def prime_power(q):
    """Return ``(p, s)`` with ``q == p**s``, or raise NonPrimePowerQ."""
    if q < 2:
        raise NonPrimePowerQ(f"{q} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise NonPrimePowerQ(f"{q} is not a prime power")
    ((p, s),) = f.items()
    return p, s


def prime_powers_upto(n, lo=2):
    """All prime powers ``lo <= q <= n`` in ascending order."""
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    out = []
    for p in np.flatnonzero(sieve).tolist():
        pk = p
        while pk <= n:
            if pk >= lo:
                out.append(pk)
            pk *= p
    out.sort()
    return out


def lcm(a, b):
    return a // gcd(a, b) * b

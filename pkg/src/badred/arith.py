"""Integer helpers: primality, factorization, prime ranges.

Thin wrappers over sympy's number theory so the rest of the package sees
plain ``int`` values.
"""

from __future__ import annotations

from sympy import factorint, isprime, primerange


def is_prime(p: int) -> bool:
    return bool(isprime(int(p)))


def factor(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` as ``{p: e}`` (empty for 0 and 1)."""
    n = abs(int(n))
    if n <= 1:
        return {}
    return {int(p): int(e) for p, e in sorted(factorint(n).items())}


def prime_divisors(n: int) -> list[int]:
    return list(factor(n))


def primes_upto(limit: int) -> list[int]:
    return [int(p) for p in primerange(2, int(limit) + 1)]

"""Reduction modulo p and squarefreeness over F_p.

This is the ground-truth side of every certificate: a prime is bad for a
hypersurface ``f = 0`` exactly when ``f mod p`` acquires a repeated factor.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable

from .arith import is_prime, primes_upto
from .polycore import Poly, content_primitive, gcd_poly, is_squarefree_rational, partial_derivative

DEFAULT_PMAX = 1000
LINE_TRIES = 4


def reduce_mod_p(f: Poly, p: int) -> Poly:
    if f.modulus is not None:
        raise ValueError("already reduced")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if f.is_zero or not f.is_integral or f.content() != 1:
        raise ValueError("reduce_mod_p expects a primitive integer polynomial")
    return Poly(f.nvars, f.terms, modulus=p)


# ---------------------------------------------------------------------------
# univariate helpers over F_p (dense lists, low degree first)


def _trim(a: list[int]) -> list[int]:
    while a and not a[-1]:
        a.pop()
    return a


def _umod(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) > db:
        c = a[-1] * inv % p
        if c:
            off = len(a) - 1 - db
            for i, bi in enumerate(b):
                a[off + i] = (a[off + i] - c * bi) % p
        a.pop()
        _trim(a)
    return a


def _ugcd_degree(a: list[int], b: list[int], p: int) -> int:
    a, b = _trim(a[:]), _trim(b[:])
    while b:
        a, b = b, _umod(a, b, p)
    return len(a) - 1


def _restrict_to_line(f: Poly, a: list[int], b: list[int]) -> list[int]:
    """Coefficients of ``t -> f(a + t*b)`` over F_p."""
    p = f.modulus
    deg = f.total_degree
    lin = [[ai % p, bi % p] for ai, bi in zip(a, b)]
    pows = []
    for l in lin:
        row = [[1]]
        for _ in range(deg):
            prev = row[-1]
            nxt = [0] * (len(prev) + 1)
            for i, c in enumerate(prev):
                nxt[i] = (nxt[i] + c * l[0]) % p
                nxt[i + 1] = (nxt[i + 1] + c * l[1]) % p
            row.append(nxt)
        pows.append(row)
    out = [0] * (deg + 1)
    for e, c in f.terms.items():
        acc = [c]
        for v, k in enumerate(e):
            if k:
                q = pows[v][k]
                nxt = [0] * (len(acc) + len(q) - 1)
                for i, x in enumerate(acc):
                    if x:
                        for j, y in enumerate(q):
                            nxt[i + j] += x * y
                acc = [x % p for x in nxt]
        for i, x in enumerate(acc):
            out[i] = (out[i] + x) % p
    return out


def _line_says_squarefree(f: Poly, tries: int = LINE_TRIES) -> bool:
    """One-sided test for homogeneous ``f``: True only if some restriction of
    ``f`` to a line is a squarefree binary form, which forces ``f`` itself to
    be squarefree (a square factor q^2 restricts to a square of positive
    degree, or the restriction vanishes)."""
    p = f.modulus
    deg = f.total_degree
    rng = random.Random(p * 1000003 + deg)
    for _ in range(tries):
        a = [rng.randrange(p) for _ in range(f.nvars)]
        b = [rng.randrange(p) for _ in range(f.nvars)]
        g = _trim(_restrict_to_line(f, a, b))
        if len(g) - 1 < deg - 1:
            continue
        dg = [(i * c) % p for i, c in enumerate(g)][1:]
        if _ugcd_degree(g, dg, p) == 0:
            return True
    return False


def squarefree_mod_p(f: Poly, accelerate: bool = True) -> bool:
    """True iff ``f`` (over F_p) has no repeated irreducible factor.

    Decided by ``gcd(f, df/dT0, ..., df/dTn)`` being constant.  For
    homogeneous input a few random line restrictions are tried first; they can
    only confirm squarefreeness, never refute it.
    """
    if f.modulus is None:
        raise ValueError("expected a polynomial over F_p")
    if f.is_zero:
        raise ValueError("zero polynomial")
    if f.is_constant:
        return True
    if f.total_degree == 1:
        return True
    if accelerate and f.is_homogeneous and _line_says_squarefree(f):
        return True
    g = f
    for v in f.used_vars():
        g = gcd_poly(g, partial_derivative(f, v))
        if g.is_constant:
            return True
    return g.is_constant


def is_bad_prime(f: Poly, p: int, accelerate: bool = True) -> bool:
    """``f`` primitive integral; True when ``f mod p`` has a square factor."""
    return not squarefree_mod_p(reduce_mod_p(f, p), accelerate)


def _check(args):
    f, p = args
    return p, is_bad_prime(f, p)


_POOLS: dict[int, ProcessPoolExecutor] = {}


def _pool(jobs: int) -> ProcessPoolExecutor:
    if jobs not in _POOLS:
        _POOLS[jobs] = ProcessPoolExecutor(max_workers=jobs)
    return _POOLS[jobs]


def scan_primes(f: Poly, primes: Iterable[int], jobs: int = 1) -> list[int]:
    """Bad primes among ``primes`` for the primitive integer polynomial ``f``."""
    primes = sorted(set(int(p) for p in primes))
    if jobs > 1 and len(primes) > 1:
        res = list(_pool(jobs).map(_check, [(f, p) for p in primes], chunksize=16))
    else:
        res = [_check((f, p)) for p in primes]
    return sorted(p for p, bad in res if bad)


def oracle_bad_primes(f: Poly, p_max: int = DEFAULT_PMAX, extra: Iterable[int] = (),
                      jobs: int = 1) -> list[int]:
    """Primes ``p <= p_max`` (plus any listed in ``extra``) at which the
    hypersurface ``f = 0`` stops being reduced."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    if not f.is_homogeneous:
        raise ValueError("oracle expects a homogeneous polynomial")
    if p_max < 2:
        raise ValueError("p_max must be at least 2")
    if not is_squarefree_rational(f):
        raise ValueError("input has a square factor over Q")
    prim = content_primitive(f)[1]
    return scan_primes(prim, list(primes_upto(p_max)) + list(extra), jobs)

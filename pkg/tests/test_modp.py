import random
from itertools import product

import pytest

from badred.bounds import build_certificate
from badred.corpus import random_form, random_hypersurfaces
from badred.modp import (
    is_bad_prime,
    oracle_bad_primes,
    reduce_mod_p,
    scan_primes,
    squarefree_mod_p,
)
from badred.polycore import Poly, content_primitive, is_squarefree_rational, parse_poly


def P(text, nvars=2):
    return parse_poly(text, nvars)


def Fp(text, p, nvars=2):
    return reduce_mod_p(P(text, nvars), p)


def test_reduction_examples():
    assert Fp("T1^2 - 5*T0^2", 5) == Poly(2, {(0, 2): 1}, modulus=5)
    assert Fp("T1^2 - 5*T0^2", 3) == Poly(2, {(0, 2): 1, (2, 0): 1}, modulus=3)
    assert Fp("6*T0 + T1", 2) == Poly(2, {(0, 1): 1}, modulus=2)


def test_reduction_errors():
    with pytest.raises(ValueError):
        reduce_mod_p(P("2*T0 + 4*T1"), 3)
    with pytest.raises(ValueError):
        reduce_mod_p(P("T0 + T1"), 9)
    with pytest.raises(ValueError):
        reduce_mod_p(P("T0/2 + T1"), 3)


def test_squarefree_examples():
    assert not squarefree_mod_p(Fp("T1^2", 5))
    assert squarefree_mod_p(Fp("T1^2 + T0^2", 3))
    assert not squarefree_mod_p(Fp("T0^2 + 2*T0*T1 + T1^2", 2))
    with pytest.raises(ValueError):
        squarefree_mod_p(Poly(2, modulus=3))


def test_frobenius_edge():
    # every exponent a multiple of p: all partials vanish, f is a p-th power
    for p in (2, 3, 5):
        f = reduce_mod_p(P(f"T0^{p} + T1^{p}"), p)
        assert not squarefree_mod_p(f)
        assert not squarefree_mod_p(f, accelerate=False)
        g = reduce_mod_p(P(f"T0^{2 * p} + 3*T0^{p}*T1^{p} + T2^{2 * p}", 3), p)
        assert not squarefree_mod_p(g)
    assert squarefree_mod_p(Poly.constant(4, 2, modulus=7))


def _monic_polys(p, deg):
    for tail in product(range(p), repeat=deg):
        yield list(tail) + [1]


def _divides_square(q, f, p):
    # does q^2 divide f in F_p[x]? dense lists, low degree first
    sq = [0] * (2 * len(q) - 1)
    for i, a in enumerate(q):
        for j, b in enumerate(q):
            sq[i + j] = (sq[i + j] + a * b) % p
    r = f[:]
    while len(r) >= len(sq):
        c = r[-1]
        off = len(r) - len(sq)
        for i, b in enumerate(sq):
            r[off + i] = (r[off + i] - c * b) % p
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return not r


def test_trial_division_oracle():
    rng = random.Random(2)
    checked = 0
    for p in (2, 3, 5, 7):
        for _ in range(60):
            deg = rng.randint(1, 6)
            f = [rng.randrange(p) for _ in range(deg)] + [rng.randrange(1, p)]
            if rng.random() < 0.4:
                # plant a square
                q = [rng.randrange(p), 1]
                sq = [q[0] * q[0] % p, 2 * q[0] % p, 1]
                f = f[:max(1, deg - 2)]
                f = f + [rng.randrange(1, p)] if f[-1] == 0 else f
                prod_ = [0] * (len(f) + 2)
                for i, a in enumerate(f):
                    for j, b in enumerate(sq):
                        prod_[i + j] = (prod_[i + j] + a * b) % p
                f = prod_
            while f and f[-1] == 0:
                f.pop()
            d = len(f) - 1
            lead_inv = pow(f[-1], -1, p)
            monic = [c * lead_inv % p for c in f]
            expect = not any(_divides_square(q, monic, p)
                             for k in range(1, d // 2 + 1) for q in _monic_polys(p, k))
            poly = Poly(1, {(i,): c for i, c in enumerate(f)}, modulus=p)
            assert squarefree_mod_p(poly) == expect, (f, p)
            # the same form homogenized (accelerated path)
            hom = Poly(2, {(d - i, i): c for i, c in enumerate(f) if c}, modulus=p)
            if f[0] != 0:
                assert squarefree_mod_p(hom) == expect
            checked += 1
    assert checked == 240


def test_accelerated_path_agrees_with_gcd():
    rng = random.Random(8)
    for _ in range(80):
        nv, d = rng.randint(2, 4), rng.randint(2, 5)
        f = random_form(rng, nv, d, 99)
        if not is_squarefree_rational(f):
            continue
        f = content_primitive(f)[1]
        for p in (2, 3, 5, 7, 11, 101):
            g = reduce_mod_p(f, p)
            assert squarefree_mod_p(g) == squarefree_mod_p(g, accelerate=False)


def test_oracle_examples():
    assert oracle_bad_primes(P("T1^2 - 5*T0^2"), 100) == [2, 5]
    assert oracle_bad_primes(P("T0 + T1"), 100) == []
    assert oracle_bad_primes(P("T0^2 - T1^2"), 10) == [2]


def test_oracle_hypotheses():
    with pytest.raises(ValueError):
        oracle_bad_primes(P("(T0+T1)^2"), 50)
    with pytest.raises(ValueError):
        oracle_bad_primes(P("T0^2 + T1"), 50)
    with pytest.raises(ValueError):
        oracle_bad_primes(P("T0 + T1"), 1)


def test_oracle_extra_primes_beyond_pmax():
    f = P("T1^2 - 1009*T0^2")
    assert oracle_bad_primes(f, 50) == [2]
    assert oracle_bad_primes(f, 50, extra=[1009]) == [2, 1009]


def test_parallel_scan_matches_serial():
    f = P("T1^3 - 7*T0*T1^2 + 30*T0^3")
    primes = list(range(2, 200))
    from badred.arith import is_prime
    primes = [p for p in primes if is_prime(p)]
    assert scan_primes(f, primes, jobs=2) == scan_primes(f, primes, jobs=1)


def test_oracle_contained_in_certificate():
    for f in random_hypersurfaces(30, 99):
        sup = set(build_certificate(f).prime_superset)
        for p in oracle_bad_primes(f, 300):
            assert p in sup
        assert all(not is_bad_prime(f, p) for p in (1009, 1013) if p not in sup)

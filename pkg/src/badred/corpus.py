"""Seeded random instances for property suites and the corpus runner."""

from __future__ import annotations

import random
from itertools import combinations_with_replacement

from .cycles import PointCycle, ProjPoint
from .polycore import Poly, content_primitive, is_squarefree_rational


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return out


def random_form(rng: random.Random, nvars: int, degree: int, coeff: int = 99,
                max_terms: int | None = None) -> Poly:
    """Random homogeneous polynomial with nonzero coefficients in [-coeff, coeff]."""
    mons = monomials(nvars, degree)
    hi = len(mons) if max_terms is None else min(len(mons), max_terms)
    k = rng.randint(min(2, hi), hi)
    terms = {}
    for e in rng.sample(mons, k):
        c = 0
        while c == 0:
            c = rng.randint(-coeff, coeff)
        terms[e] = c
    return Poly(nvars, terms)


def random_hypersurfaces(count: int, seed: int, n_range=(1, 3), deg_range=(2, 5),
                         coeff: int = 99, max_terms: int | None = None) -> list[Poly]:
    """Primitive homogeneous polynomials, squarefree over Q, in n+1 variables."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(*n_range)
        d = rng.randint(*deg_range)
        f = random_form(rng, n + 1, d, coeff, max_terms)
        if f.is_monomial or not is_squarefree_rational(f):
            continue
        out.append(content_primitive(f)[1])
    return out


def random_hyperplanes(count: int, seed: int, n_range=(1, 3), coeff: int = 99) -> list[Poly]:
    return random_hypersurfaces(count, seed, n_range, (1, 1), coeff, None)


def random_cycles(count: int, seed: int, n_range=(1, 3), deg_range=(1, 6),
                  coord: int = 50) -> list[PointCycle]:
    """Reduced cycles of distinct rational points with entries in [-coord, coord]."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(*n_range)
        delta = rng.randint(*deg_range)
        pts: dict[ProjPoint, None] = {}
        while len(pts) < delta:
            v = [rng.randint(-coord, coord) for _ in range(n + 1)]
            if any(v):
                pts[ProjPoint(tuple(v))] = None
        out.append(PointCycle.of(list(pts)))
    return out


def random_pairs(count: int, seed: int, nvars_range=(2, 3), deg_range=(1, 3),
                 coeff: int = 9):
    """Pairs ``(f, g, var)``; every other pair shares a planted factor."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        nv = rng.randint(*nvars_range)
        f = random_form(rng, nv, rng.randint(*deg_range), coeff)
        g = random_form(rng, nv, rng.randint(*deg_range), coeff)
        if len(out) % 2 == 0:
            h = random_form(rng, nv, rng.randint(1, 2), coeff)
            f, g = f * h, g * h
        used = sorted(set(f.used_vars()) | set(g.used_vars()))
        out.append((f, g, rng.choice(used)))
    return out


def random_univariate(count: int, seed: int, deg_range=(1, 6), coeff: int = 20) -> list[Poly]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.randint(*deg_range)
        terms = {(i,): rng.randint(-coeff, coeff) for i in range(d + 1)}
        while terms[(d,)] == 0:
            terms[(d,)] = rng.randint(-coeff, coeff)
        f = Poly(1, terms)
        if not f.is_constant:
            out.append(f)
    return out

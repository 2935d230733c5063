"""Zero-dimensional cycles of rational points in P^n and their Cayley forms."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from math import gcd

import mpmath

from . import bounds
from .arith import prime_divisors, primes_upto
from .modp import DEFAULT_PMAX, scan_primes
from .polycore import Poly, to_string

CYCLE_PMAX = 100


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coords)
        if not any(c):
            raise ValueError("the zero vector is not a projective point")
        g = reduce(gcd, c)
        first = next(x for x in c if x)
        if first < 0:
            g = -g
        object.__setattr__(self, "coords", tuple(x // g for x in c))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def norm_log(self) -> float:
        with mpmath.workprec(bounds.PREC):
            return float(mpmath.log(sum(x * x for x in self.coords)) / 2)

    def __str__(self):
        return "[" + " : ".join(map(str, self.coords)) + "]"


@dataclass(frozen=True)
class PointCycle:
    points: tuple[tuple[ProjPoint, int], ...]
    ambient_n: int

    def __post_init__(self):
        if not self.points:
            raise ValueError("empty cycle")
        seen = set()
        for p, m in self.points:
            if p.n != self.ambient_n:
                raise ValueError(f"point {p} does not lie in P^{self.ambient_n}")
            if int(m) != m or m < 1:
                raise ValueError("multiplicities must be positive integers")
            if p in seen:
                raise ValueError(f"point {p} listed twice")
            seen.add(p)

    @classmethod
    def of(cls, pts, mults=None) -> "PointCycle":
        pts = [p if isinstance(p, ProjPoint) else ProjPoint(tuple(p)) for p in pts]
        mults = list(mults) if mults is not None else [1] * len(pts)
        return cls(tuple(zip(pts, mults)), pts[0].n)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.points)

    @property
    def is_reduced(self) -> bool:
        return all(m == 1 for _, m in self.points)

    def union(self, other: "PointCycle") -> "PointCycle":
        return PointCycle(self.points + other.points, self.ambient_n)


_LINE = re.compile(r"^\[(?P<body>[^\]]*)\]\s*(?:\*\s*(?P<m>\d+))?$")


def parse_cycle(text: str) -> PointCycle:
    """One point per line: ``[a0 : a1 : ... : an] * m`` (``* m`` optional).
    Blank lines and ``#`` comments are ignored."""
    pts, mults = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        mt = _LINE.match(line)
        if not mt:
            raise ValueError(f"line {lineno}: expected '[a0 : ... : an] * m'")
        try:
            coords = tuple(int(x) for x in mt["body"].split(":"))
        except ValueError:
            raise ValueError(f"line {lineno}: coordinates must be integers") from None
        pts.append(ProjPoint(coords))
        mults.append(int(mt["m"]) if mt["m"] else 1)
    if not pts:
        raise ValueError("no points given")
    if len({p.n for p in pts}) != 1:
        raise ValueError("points live in different projective spaces")
    return PointCycle.of(pts, mults)


def format_cycle(c: PointCycle) -> str:
    return "".join(f"{p} * {m}\n" for p, m in c.points)


def cayley_form(c: PointCycle) -> Poly:
    """Product of the dual linear forms ``(sum_j p_j u_j)^m`` over the points."""
    nv = c.ambient_n + 1
    out = Poly.constant(1, nv)
    for p, m in c.points:
        lin = Poly(nv, {tuple(int(i == j) for i in range(nv)): x for j, x in enumerate(p.coords) if x})
        out = out * lin ** m
    return out


def cycle_height(c: PointCycle) -> float:
    """Sum of ``m * log ||p||_2`` over primitive integer coordinates."""
    with mpmath.workprec(bounds.PREC):
        return float(mpmath.fsum(m * mpmath.log(sum(x * x for x in p.coords)) / 2 for p, m in c.points))


def _minor_gcd(a: ProjPoint, b: ProjPoint) -> int:
    g = 0
    for i, j in combinations(range(len(a.coords)), 2):
        g = gcd(g, a.coords[i] * b.coords[j] - a.coords[j] * b.coords[i])
        if g == 1:
            break
    return g


def pairwise_collision_primes(c: PointCycle) -> list[int]:
    """Primes modulo which two of the points become proportional, i.e. the
    primes dividing all 2x2 minors of some pair."""
    out: set[int] = set()
    pts = [p for p, _ in c.points]
    for a, b in combinations(pts, 2):
        out.update(prime_divisors(_minor_gcd(a, b)))
    return sorted(out)


def cycle_bad_primes(c: PointCycle, p_max: int = DEFAULT_PMAX, extra=(), jobs: int = 1) -> list[int]:
    """Primes ``<= p_max`` (and any in ``extra``) where the Cayley form of the
    reduced cycle acquires a square factor."""
    if not c.is_reduced:
        raise ValueError("bad-prime analysis needs a reduced cycle (all multiplicities 1)")
    if p_max < 2:
        raise ValueError("p_max must be at least 2")
    return scan_primes(cayley_form(c), list(primes_upto(p_max)) + list(extra), jobs)


def cycle_report(c: PointCycle, p_max: int = CYCLE_PMAX, jobs: int = 1) -> dict:
    psi = cayley_form(c)
    h = cycle_height(c)
    out = {
        "points": [[list(p.coords), m] for p, m in c.points],
        "ambient_n": c.ambient_n,
        "degree": c.degree,
        "cayley_form": to_string(psi),
        "height": h,
    }
    if not c.is_reduced:
        out["reduced"] = False
        return out
    pairwise = pairwise_collision_primes(c)
    bad = cycle_bad_primes(c, p_max, extra=pairwise, jobs=jobs)
    with mpmath.workprec(bounds.PREC):
        product_log = mpmath.fsum(mpmath.log(p) for p in bad)
        bound = bounds.pure_dim_bound_log_mp(c.ambient_n, 0, c.degree, 1, h)
        product_ok = bool(product_log <= bound)
    out.update({
        "reduced": True,
        "p_max": p_max,
        "bad_primes": bad,
        "pairwise_oracle": pairwise,
        "product_log": float(product_log),
        "bound_log": float(bound),
        "pass": {"oracle_agreement": bad == pairwise, "product": product_ok},
    })
    return out

"""Explicit bounds on bad primes and the recursive resultant certifier.

The certifier walks ``f -> t -> t' -> ...`` where each step eliminates the
variable of largest degree with the discriminant-type resultant of the
current polynomial and its derivative, then continues on a coefficient
polynomial.  Every prime at which ``f mod p`` acquires a square factor
divides some recorded content.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, log

import mpmath

from .arith import factor
from .heights import classical_height
from .modp import DEFAULT_PMAX, oracle_bad_primes
from .polycore import (
    Poly,
    as_univariate,
    content_primitive,
    is_squarefree_rational,
    to_string,
)
from .resultant import derivation_resultants

PREC = 128


class SquareFactorError(ValueError):
    """The input violates the reducedness hypothesis."""


class CertificationError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# bound formulas (natural logs, evaluated at PREC bits)


def _harmonic(N: int):
    return mpmath.fsum(mpmath.mpf(1) / k for k in range(1, N + 1))


def _log_comb(a: int, b: int):
    return mpmath.log(comb(a, b))


def hypersurface_bound_log_mp(n: int, delta: int, degK: int, h):
    with mpmath.workprec(PREC):
        h = mpmath.mpf(h)
        return (mpmath.mpf(2 * delta - 1) * degK / 2 * _log_comb(delta + n, n)
                + delta * degK * mpmath.log(delta)
                + (2 * delta - 1) * degK * h)


def hypersurface_bound_log(n: int, delta: int, degK: int, h) -> float:
    if delta < 1 or n < 1 or degK < 1:
        raise ValueError("need n >= 1, delta >= 1, degK >= 1")
    return float(hypersurface_bound_log_mp(n, delta, degK, h))


def hypersurface_count_bound(n: int, delta: int, degK: int, h, N0) -> float:
    if N0 < 2:
        raise ValueError("N0 must be at least 2")
    with mpmath.workprec(PREC):
        inner = ((2 * delta - 1) * mpmath.mpf(h) + delta * mpmath.log(delta)
                 + mpmath.mpf(2 * delta - 1) / 2 * _log_comb(n + delta, delta))
        return float(degK / mpmath.log(N0) * inner)


def _check_pure_dim(n: int, d: int, delta: int):
    if not (0 <= d <= n - 1) or delta < 1:
        raise ValueError("need 0 <= d <= n-1 and delta >= 1")
    return comb(n + 1, d + 1) - 1


def pure_dim_bound_log_mp(n: int, d: int, delta: int, degK: int, arakelov_h):
    N = _check_pure_dim(n, d, delta)
    with mpmath.workprec(PREC):
        HN = _harmonic(N)
        inner = (mpmath.mpf(arakelov_h) - delta * HN / 2 + 4 * delta * mpmath.log(N + 1)
                 + (N + 1) * delta * mpmath.log(2))
        return (mpmath.mpf(2 * delta - 1) * degK / 2 * _log_comb(delta + N, N)
                + delta * degK * mpmath.log(delta)
                + (2 * delta - 1) * degK * inner)


def pure_dim_bound_log(n: int, d: int, delta: int, degK: int, arakelov_h) -> float:
    return float(pure_dim_bound_log_mp(n, d, delta, degK, arakelov_h))


def _c1_mp(N: int, delta: int):
    k = 2 * delta - 1
    return (-mpmath.mpf(k) / 2 * delta * _harmonic(N)
            + (4 * k + mpmath.mpf(k) / 2) * delta * mpmath.log(N + 1)
            + k * (N + 1) * delta * mpmath.log(2)
            + delta * mpmath.log(delta))


def pure_dim_count_bound(n: int, d: int, delta: int, degK: int, arakelov_h, N0) -> float:
    N = _check_pure_dim(n, d, delta)
    if N0 < 2:
        raise ValueError("N0 must be at least 2")
    with mpmath.workprec(PREC):
        inner = (2 * delta - 1) * mpmath.mpf(arakelov_h) + _c1_mp(N, delta)
        return float(degK / mpmath.log(N0) * inner)


def c1_constant(d: int, n: int, delta: int) -> float:
    N = _check_pure_dim(n, d, delta)
    with mpmath.workprec(PREC):
        return float(_c1_mp(N, delta))


def c1_growth_ratios(d: int, n: int, max_delta: int = 50) -> list[float]:
    """``C1(d, n, delta) / delta**2`` for ``delta = 1..max_delta``."""
    return [c1_constant(d, n, k) / k ** 2 for k in range(1, max_delta + 1)]


def c1_leading_coefficient(d: int, n: int) -> float:
    """Limit of ``C1 / delta**2`` as ``delta`` grows."""
    N = _check_pure_dim(n, d, 1)
    with mpmath.workprec(PREC):
        return float(-_harmonic(N) + 9 * mpmath.log(N + 1) + 2 * (N + 1) * mpmath.log(2))


# ---------------------------------------------------------------------------
# prime counting and product inequalities


def omega_count(a: int, N0) -> tuple[int, float]:
    """Number of distinct primes ``p >= N0`` dividing ``a``, and ``log|a| / log N0``."""
    if a == 0:
        raise ValueError("a must be nonzero")
    if N0 < 2:
        raise ValueError("N0 must be at least 2")
    count = sum(1 for p in factor(a) if p >= N0)
    bound = log(abs(a)) / log(N0) if abs(a) > 1 else 0.0
    if count > bound + 1e-12:
        raise AssertionError(f"omega bound violated for {a}")
    return count, bound


def check_constante_inequalities(a: list[int], r, n: int) -> bool:
    """Exact check of the three product inequalities for ``a_1..a_m >= 1``.

    The binomial inequality indexes ``C(a_i + n - i + 1, n - i + 1)``, so
    ``m <= n + 1`` is required.
    """
    if not a or any(int(x) != x or x < 1 for x in a):
        raise ValueError("a must be a nonempty list of positive integers")
    r = Fraction(r)
    if r < 1:
        raise ValueError("r must be at least 1")
    m, s = len(a), sum(a)
    if n < 0 or m > n + 1:
        raise ValueError("need len(a) <= n + 1")

    lhs1 = Fraction(1)
    for x in a:
        lhs1 *= r ** (2 * x - 1)
    ok1 = lhs1 <= r ** (2 * s - 1)

    lhs2 = 1
    for x in a:
        lhs2 *= x ** x
    ok2 = lhs2 <= s ** s

    lhs3 = 1
    for i, x in enumerate(a, start=1):
        k = n - i + 1
        lhs3 *= comb(x + k, k) ** (2 * x - 1)
    ok3 = lhs3 <= comb(s + n, n) ** (2 * s - 1)
    return ok1 and ok2 and ok3


# ---------------------------------------------------------------------------
# certifier


@dataclass(frozen=True)
class Level:
    eliminated_var: int
    d_var: int
    sylvester_content: int
    leading_coeff_poly: Poly   # the primitive polynomial the recursion continues on
    stripped_content: int      # content removed from it before recursing
    rule: str                  # how the next polynomial was chosen


@dataclass
class ResultantCertificate:
    input: Poly
    levels: list[Level]
    prime_superset: list[int]
    terminal: str


@dataclass
class BoundVerdict:
    bound_log: float
    count_bound: float
    oracle_primes: list[int]
    certified_superset: list[int]
    product_log: float
    product: int
    p_max: int
    passed: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())


def _pick_variable(g: Poly) -> int:
    degs = g.degrees()
    top = max(degs)
    return max(i for i, k in enumerate(degs) if k == top)


def _substitute_linear(g: Poly, v: int, w: int, lam: int) -> Poly:
    """``g`` with ``T{v}`` replaced by ``lam * T{w}``."""
    out: dict = {}
    for e, c in g.terms.items():
        k = e[v]
        ne = list(e)
        ne[v] = 0
        ne[w] += k
        ne = tuple(ne)
        out[ne] = out.get(ne, 0) + c * lam ** k
    return Poly(g.nvars, out)


def _next_polynomial(g: Poly, v: int):
    """Choose the polynomial the recursion continues on after eliminating
    ``T{v}``; returns ``(poly, extra_contents, rule)``.

    A square factor of ``g mod p`` free of ``T{v}`` divides every coefficient
    ``t_i`` mod p, so any ``t_i`` that is squarefree over Q works, provided
    the content of ``t_d`` (where the Sylvester matrix may degenerate) and of
    ``t_i`` are kept.  If no coefficient is squarefree the variable is instead
    specialized along ``T{v} = lam * T{w}``, which preserves such a factor.
    """
    coeffs = as_univariate(g, v)
    lead_content = coeffs[-1].content()
    for i in range(len(coeffs) - 1, -1, -1):
        t = coeffs[i]
        if t.is_zero:
            continue
        if t.is_constant or is_squarefree_rational(t):
            rule = "leading" if i == len(coeffs) - 1 else f"coefficient {i}"
            return t, [lead_content], rule
    others = [w for w in g.used_vars() if w != v]
    for lam in range(1, 64):
        for w in reversed(others):
            s = _substitute_linear(g, v, w, lam)
            if not s.is_zero and is_squarefree_rational(s):
                return s, [lead_content], f"substitute T{v}={lam}*T{w}"
    raise CertificationError("no squarefree continuation found")


def build_certificate(f: Poly) -> ResultantCertificate:
    if f.is_zero:
        raise ValueError("zero polynomial")
    if not f.is_homogeneous:
        raise ValueError("certification requires a homogeneous polynomial")
    if not is_squarefree_rational(f):
        raise SquareFactorError("input has a square factor over ℚ")
    scale, g = content_primitive(f)
    primes: set[int] = set()
    levels: list[Level] = []
    while True:
        if g.is_constant:
            primes.update(factor(g.constant_value()))
            terminal = "constant"
            break
        if g.is_monomial and max(g.degrees()) <= 1:
            terminal = "squarefree monomial"
            break
        if g.total_degree == 1:
            # a primitive linear form stays a nonzero linear form mod every p
            terminal = "hyperplane"
            break
        v = _pick_variable(g)
        d = g.degree(v)
        res = derivation_resultants(g, v)
        if res.is_zero_ideal:
            raise CertificationError("vanishing resultant for a squarefree polynomial")
        nxt, contents, rule = _next_polynomial(g, v)
        c_scale, nxt = content_primitive(nxt)
        stripped = abs(c_scale.numerator)
        primes.update(factor(res.content))
        primes.update(factor(stripped))
        for c in contents:
            primes.update(factor(c))
        levels.append(Level(v, d, res.content, nxt, stripped, rule))
        g = nxt
    return ResultantCertificate(f, levels, sorted(primes), terminal)


def _max_abs_coeff(f: Poly) -> int:
    return max(abs(c) for c in content_primitive(f)[1].terms.values())


def certify_hypersurface(f: Poly, p_max: int = DEFAULT_PMAX, jobs: int = 1):
    """Certificate and verdict for the reduced hypersurface ``f = 0`` over Q.

    The oracle scans all primes up to ``p_max`` and, individually, every
    prime of the certified superset.
    """
    cert = build_certificate(f)
    n = f.nvars - 1
    delta = f.total_degree
    H = _max_abs_coeff(f)
    h = classical_height(f).value
    oracle = oracle_bad_primes(f, p_max, extra=cert.prime_superset, jobs=jobs)
    product = 1
    for p in oracle:
        product *= p
    with mpmath.workprec(PREC):
        product_log = float(mpmath.fsum(mpmath.log(p) for p in oracle))
    if n >= 1:
        bound_log = hypersurface_bound_log(n, delta, 1, h)
        count_bound = hypersurface_count_bound(n, delta, 1, h, 2)
        # product <= C(delta+n, n)^((2delta-1)/2) * delta^delta * H^(2delta-1), squared
        rhs = comb(delta + n, n) ** (2 * delta - 1) * delta ** (2 * delta) * H ** (2 * (2 * delta - 1))
        product_ok = product * product <= rhs
        count_ok = len(oracle) <= count_bound + 1e-9
    else:
        bound_log = count_bound = 0.0
        product_ok = count_ok = not oracle
    verdict = BoundVerdict(
        bound_log=bound_log,
        count_bound=count_bound,
        oracle_primes=oracle,
        certified_superset=cert.prime_superset,
        product_log=product_log,
        product=product,
        p_max=p_max,
        passed={
            "containment": set(oracle) <= set(cert.prime_superset),
            "product": product_ok,
            "count": count_ok,
        },
    )
    return cert, verdict


def certificate_dict(cert: ResultantCertificate, verdict: BoundVerdict) -> dict:
    return {
        "input": to_string(cert.input),
        "levels": [
            {
                "var": lv.eliminated_var,
                "d": lv.d_var,
                "content": lv.sylvester_content,
                "content_factorization": [[p, e] for p, e in factor(lv.sylvester_content).items()],
                "next": to_string(lv.leading_coeff_poly),
                "stripped_content": lv.stripped_content,
                "rule": lv.rule,
            }
            for lv in cert.levels
        ],
        "terminal": cert.terminal,
        "superset": cert.prime_superset,
        "oracle": verdict.oracle_primes,
        "p_max": verdict.p_max,
        "bound_log": verdict.bound_log,
        "product_log": verdict.product_log,
        "count_bound": verdict.count_bound,
        "pass": dict(verdict.passed),
    }

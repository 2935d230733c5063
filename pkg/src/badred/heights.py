"""Heights of polynomials: classical, L2, Mahler measure, Fubini-Study
0-norm and Philippon height, plus the standard comparison inequalities."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, log, sqrt

import mpmath
import numpy as np

from . import _kernels
from .polycore import Poly, content_primitive

UNIVARIATE_TOL = 1e-11
UNIVARIATE_START = 1024
UNIVARIATE_MAX = 1 << 21
ROUNDOFF = 1e-12
DEFAULT_SAMPLES = 20000
BATCH = 4096
# base grid per torus dimension; the rule runs at N, 2N and 4N
DEFAULT_GRID = {1: UNIVARIATE_START, 2: 256, 3: 32, 4: 12}


@dataclass(frozen=True)
class ExactLog:
    """``value = log(witness)`` with the positive rational witness kept exactly."""
    witness: Fraction
    value: float


@dataclass(frozen=True)
class Estimate:
    est: float
    err: float
    method: str = ""
    grid: int = 0


def _mp_log(x) -> float:
    x = Fraction(x)
    with mpmath.workprec(128):
        return float(mpmath.log(mpmath.mpf(x.numerator)) - mpmath.log(mpmath.mpf(x.denominator)))


def _nonzero(f: Poly):
    if f.is_zero:
        raise ValueError("zero polynomial")
    if f.modulus is not None:
        raise ValueError("expected a rational polynomial")


def classical_height(f: Poly) -> ExactLog:
    """Sum over all places of log max |a_i|_v; for primitive integer forms this
    is log of the largest absolute coefficient."""
    _nonzero(f)
    prim = content_primitive(f)[1]
    H = max(abs(c) for c in prim.terms.values())
    return ExactLog(Fraction(H), _mp_log(H))


def l2_norm_log(f: Poly) -> float:
    _nonzero(f)
    s = sum(Fraction(c) ** 2 for c in f.terms.values())
    return _mp_log(s) / 2


# ---------------------------------------------------------------------------
# Mahler measure


def _reduce_for_torus(f: Poly):
    """Drop unused variables and, for homogeneous input, dehomogenize; both
    leave the Mahler measure unchanged.  Returns ``(coeffs, exps)``."""
    used = f.used_vars()
    if f.is_homogeneous and len(used) >= 2:
        used = used[1:]
    coeffs = np.array([complex(float(c)) for c in f.terms.values()])
    exps = np.array([[e[v] for v in used] for e in f.terms], dtype=np.int64).reshape(len(coeffs), len(used))
    # merge monomials that collided after dehomogenization
    if exps.shape[1]:
        uniq, inv = np.unique(exps, axis=0, return_inverse=True)
        merged = np.zeros(len(uniq), dtype=np.complex128)
        np.add.at(merged, inv.ravel(), coeffs)
        keep = merged != 0
        return merged[keep], uniq[keep]
    return np.array([coeffs.sum()]), np.zeros((1, 0), dtype=np.int64)


def _torus_mean(coeffs, exps, N, thresh) -> float:
    acc, _ = _kernels.torus_log_sum(coeffs, exps, N, thresh)
    return acc / N ** exps.shape[1]


def mahler_jensen_log(f: Poly) -> float:
    """Jensen's formula ``log|a_d| + sum log max(1, |root|)`` for a polynomial
    in at most one variable."""
    _nonzero(f)
    used = f.used_vars()
    if len(used) > 1:
        raise ValueError("Jensen path needs a univariate polynomial")
    if not used:
        return _mp_log(abs(Fraction(f.constant_value())))
    v = used[0]
    d = f.degree(v)
    coeffs = [0.0] * (d + 1)
    for e, c in f.terms.items():
        coeffs[d - e[v]] = float(c)
    lead = _mp_log(abs(Fraction(f.terms[max(f.terms, key=lambda e: e[v])])))
    # trailing zero roots contribute nothing
    while coeffs[-1] == 0:
        coeffs.pop()
    roots = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
    return lead + float(np.sum(np.log(np.maximum(1.0, np.abs(roots)))))


def mahler_measure_log(f: Poly, grid: int | None = None, tol: float = UNIVARIATE_TOL) -> Estimate:
    """log M(f) by midpoint trapezoid sums on the unit torus with Richardson
    extrapolation ``2*I(2N) - I(N)``.

    One variable: ``N`` doubles until successive extrapolations agree to
    ``tol``.  Several variables: three levels ``N, 2N, 4N``.  The error bound
    is the larger of the last extrapolation and raw-sum differences.
    """
    _nonzero(f)
    if f.is_constant:
        return Estimate(_mp_log(abs(Fraction(f.constant_value()))), 0.0, "exact")
    if f.is_monomial:
        return Estimate(_mp_log(abs(Fraction(next(iter(f.terms.values()))))), 0.0, "exact")
    coeffs, exps = _reduce_for_torus(f)
    k = exps.shape[1]
    if len(coeffs) == 1 or k == 0:
        return Estimate(float(np.log(np.abs(coeffs).max())), 0.0, "exact")
    if k > 4:
        raise ValueError("Mahler quadrature supports at most 4 torus variables")
    thresh = 1e-12 * float(np.sqrt(np.sum(np.abs(coeffs) ** 2)))
    N = grid or DEFAULT_GRID[k]
    I = [_torus_mean(coeffs, exps, N, thresh), _torus_mean(coeffs, exps, 2 * N, thresh)]
    R = [2 * I[1] - I[0]]
    N *= 2
    while True:
        N *= 2
        I.append(_torus_mean(coeffs, exps, N, thresh))
        R.append(2 * I[-1] - I[-2])
        err = max(abs(R[-1] - R[-2]), abs(I[-1] - I[-2]))
        if k > 1 or abs(R[-1] - R[-2]) < tol or N >= UNIVARIATE_MAX:
            break
    est = R[-1]
    if not np.isfinite(est):
        return Estimate(float("nan"), float("inf"), "torus", N)
    # converged levels can agree to the last bit; keep room for roundoff
    err += ROUNDOFF * (1.0 + abs(est))
    return Estimate(float(est), float(err), "torus", N)


# ---------------------------------------------------------------------------
# Fubini-Study 0-norm


def sphere_samples(nvars: int, count: int, seed: int):
    """Uniform points on the unit sphere of C^nvars in deterministic batches:
    batch ``b`` always uses the ``b``-th child of ``SeedSequence(seed)``."""
    nb = -(-count // BATCH)
    for b, ss in enumerate(np.random.SeedSequence(seed).spawn(nb)):
        size = min(BATCH, count - b * BATCH)
        rng = np.random.default_rng(ss)
        z = rng.standard_normal((size, nvars)) + 1j * rng.standard_normal((size, nvars))
        yield z / np.linalg.norm(z, axis=1, keepdims=True)


def zero_norm_log(f: Poly, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> Estimate:
    """Monte Carlo mean of ``log|f(x)|`` over the unit sphere (the
    Fubini-Study log-norm averaged over projective space); error is three
    standard errors."""
    _nonzero(f)
    if not f.is_homogeneous:
        raise ValueError("0-norm needs a homogeneous polynomial")
    if f.is_constant:
        return Estimate(_mp_log(abs(Fraction(f.constant_value()))), 0.0, "exact")
    coeffs = np.array([complex(float(c)) for c in f.terms.values()])
    exps = np.array(list(f.terms), dtype=np.int64)
    vals = np.concatenate([
        _kernels.log_abs_at(coeffs, exps, pts) for pts in sphere_samples(f.nvars, samples, seed)
    ])
    est = float(np.mean(vals))
    err = 3.0 * float(np.std(vals, ddof=1)) / sqrt(samples) if samples > 1 else float("inf")
    return Estimate(est, err, "monte-carlo", samples)


def harmonic(n: int) -> float:
    return float(sum(Fraction(1, k) for k in range(1, n + 1)))


# ---------------------------------------------------------------------------
# Philippon height and the comparison table


def philippon_height(f: Poly, grid: int | None = None) -> Estimate:
    """Finite places contribute ``-log|content|``; the archimedean place
    contributes log M(f)."""
    _nonzero(f)
    if not f.is_homogeneous:
        raise ValueError("Philippon height needs a homogeneous polynomial")
    scale, _ = content_primitive(f)
    m = mahler_measure_log(f, grid)
    return Estimate(m.est - _mp_log(abs(scale)), m.err, m.method, m.grid)


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool

    def as_dict(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "slack": self.slack, "pass": self.passed}


def _ineq(name, lhs, rhs, tol=0.0):
    slack = rhs - lhs
    return Inequality(name, float(lhs), float(rhs), float(slack), bool(slack + tol >= 0))


@dataclass
class HeightReport:
    nvars: int
    degree: int
    classical: ExactLog
    l2_log: float
    mahler: Estimate
    zero_norm: Estimate | None
    philippon: Estimate | None
    inequalities: list[Inequality] = field(default_factory=list)
    samples: int = 0
    seed: int = 0

    def as_dict(self) -> dict:
        def est(e):
            return None if e is None else {"est": e.est, "err": e.err}
        return {
            "classical": self.classical.value,
            "classical_witness": str(self.classical.witness),
            "l2": self.l2_log,
            "mahler": {"est": self.mahler.est, "err": self.mahler.err,
                       "method": self.mahler.method, "grid": self.mahler.grid},
            "zero_norm": est(self.zero_norm),
            "philippon": est(self.philippon),
            "inequalities": [q.as_dict() for q in self.inequalities],
            "samples": self.samples,
            "seed": self.seed,
        }


def _torus_degrees(f: Poly) -> list[int]:
    """Per-variable degrees of the polynomial the Mahler measure is taken of."""
    _, exps = _reduce_for_torus(f)
    return [int(x) for x in exps.max(axis=0)] if exps.size else []


def check_height_inequalities(f: Poly, mahler: Estimate | None = None,
                              zero: Estimate | None = None, samples: int = DEFAULT_SAMPLES,
                              seed: int = 0, grid: int | None = None) -> list[Inequality]:
    """Evaluate each comparison; numerical sides are widened by their error
    bounds, exact sides are compared exactly."""
    _nonzero(f)
    if not f.is_homogeneous:
        raise ValueError("inequality table needs a homogeneous polynomial")
    n = f.nvars - 1
    delta = f.total_degree
    mahler = mahler or mahler_measure_log(f, grid)
    zero = zero or zero_norm_log(f, samples, seed)
    scale, _ = content_primitive(f)
    h = classical_height(f).value
    hph = mahler.est - _mp_log(abs(scale))
    m_err, z_err = mahler.err, zero.err
    l2 = l2_norm_log(f)
    coeffs = [Fraction(c) for c in f.terms.values()]
    mx = max(abs(c) for c in coeffs)
    sq = sum(c * c for c in coeffs)
    log_mx = _mp_log(mx)
    tdeg = _torus_degrees(f)

    out = [
        _ineq("philippon_lower", hph - 0.5 * log((n + 1) * (delta + 1)), h, m_err),
        _ineq("philippon_upper", h, hph + (n + 1) * delta * log(2), m_err),
        _ineq("zero_norm_lower", 0.0, mahler.est - zero.est, m_err + z_err),
        _ineq("zero_norm_upper", mahler.est - zero.est, 4 * delta * log(n + 1) if n else 0.0,
              m_err + z_err),
    ]
    # exact: sum a^2 <= prod(d_i + 1) * max^2
    cells = 1
    for d in f.degrees():
        cells *= d + 1
    q = _ineq("l2_vs_degree_box", l2, 0.5 * _mp_log(cells * mx * mx))
    out.append(Inequality(q.name, q.lhs, q.rhs, q.slack, sq <= cells * mx * mx))
    # exact: max <= L2 <= C(n + delta, delta)^(1/2) max
    q = _ineq("max_le_l2", log_mx, l2)
    out.append(Inequality(q.name, q.lhs, q.rhs, q.slack, mx * mx <= sq))
    nb = comb(n + delta, delta)
    q = _ineq("l2_le_binomial_max", l2, 0.5 * _mp_log(nb * mx * mx))
    out.append(Inequality(q.name, q.lhs, q.rhs, q.slack, sq <= nb * mx * mx))
    # coefficient bounds against an upper estimate of M
    m_hi = mahler.est + m_err
    out.append(_ineq("max_vs_mahler", log_mx, sum(tdeg) * log(2) + m_hi))
    coeffs_t, exps_t = _reduce_for_torus(f)
    worst = None
    for c, e in zip(coeffs_t, exps_t):
        rhs = sum(log(comb(int(d), int(i))) for d, i in zip(tdeg, e)) + m_hi
        q = _ineq("coefficient_vs_mahler", float(np.log(abs(c))), rhs)
        if worst is None or q.slack < worst.slack:
            worst = q
    out.append(worst)
    out.append(_ineq("mahler_le_l2", mahler.est, l2, m_err))
    return out


def height_report(f: Poly, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                  grid: int | None = None) -> HeightReport:
    _nonzero(f)
    mahler = mahler_measure_log(f, grid)
    zero = ph = None
    ineqs: list[Inequality] = []
    if f.is_homogeneous:
        zero = zero_norm_log(f, samples, seed)
        scale, _ = content_primitive(f)
        ph = Estimate(mahler.est - _mp_log(abs(scale)), mahler.err, mahler.method, mahler.grid)
        ineqs = check_height_inequalities(f, mahler, zero)
    return HeightReport(f.nvars, f.total_degree, classical_height(f), l2_norm_log(f),
                        mahler, zero, ph, ineqs, samples, seed)

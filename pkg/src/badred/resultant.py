"""(m, n)-resultants as Sylvester determinants over Z[T].

The determinant of a matrix of integer polynomials is evaluated with
fraction-free (Bareiss) elimination.  The fast path packs every entry into a
single big integer (Kronecker substitution ``T_j -> 2**(B * stride_j)``), runs
Bareiss on ``gmpy2.mpz`` values and unpacks the result; evaluation at a point
is a ring homomorphism, so each exact division stays exact, and ``B`` is
chosen from a coefficient bound valid for every minor so the packing is
injective.  ``det_bareiss`` runs the same elimination on :class:`Poly`
entries and serves as the reference path.
"""

from __future__ import annotations

from dataclasses import dataclass

try:
    import gmpy2
    _mpz = gmpy2.mpz
    _divexact = gmpy2.divexact
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    gmpy2 = None
    _mpz = int

    def _divexact(a, b):
        q, r = divmod(a, b)
        assert not r
        return q

from .polycore import Poly, as_univariate, content_primitive, exquo, partial_derivative


@dataclass(frozen=True)
class SylvesterSpec:
    f_coeffs: tuple  # t_0 .. t_m (Poly), zero-padded above the true degree
    g_coeffs: tuple  # s_0 .. s_n
    m: int
    n: int

    def __post_init__(self):
        if len(self.f_coeffs) != self.m + 1 or len(self.g_coeffs) != self.n + 1:
            raise ValueError("coefficient list lengths must be m+1 and n+1")
        if self.m < 0 or self.n < 0 or (self.m == 0 and self.n == 0):
            raise ValueError("need m >= 1 or n >= 1")

    def matrix(self) -> list[list[Poly]]:
        m, n = self.m, self.n
        size = m + n
        zero = self.f_coeffs[0].zero()
        rows = []
        for i in range(n):
            row = [zero] * size
            for k in range(m + 1):
                row[i + k] = self.f_coeffs[m - k]
            rows.append(row)
        for i in range(m):
            row = [zero] * size
            for k in range(n + 1):
                row[i + k] = self.g_coeffs[n - k]
            rows.append(row)
        return rows


@dataclass(frozen=True)
class ResultantValue:
    det: Poly
    content: int

    @property
    def is_zero_ideal(self) -> bool:
        return self.det.is_zero


def _pad(coeffs: list[Poly], k: int) -> tuple:
    z = coeffs[0].zero()
    return tuple(coeffs) + (z,) * (k + 1 - len(coeffs))


def sylvester_spec(f: Poly, g: Poly, var: int, m: int, n: int) -> SylvesterSpec:
    if f.is_zero or g.is_zero:
        raise ValueError("resultant of a zero polynomial")
    if f.degree(var) > m or g.degree(var) > n:
        raise ValueError(f"declared degrees ({m},{n}) below true degrees "
                         f"({f.degree(var)},{g.degree(var)})")
    return SylvesterSpec(_pad(as_univariate(f, var), m), _pad(as_univariate(g, var), n), m, n)


# ---------------------------------------------------------------------------
# determinants


def det_bareiss(M: list[list[Poly]]) -> Poly:
    """Bareiss elimination directly on polynomial entries."""
    size = len(M)
    if size == 0:
        raise ValueError("empty matrix")
    A = [list(r) for r in M]
    sign = 1
    prev = A[0][0].one()
    for k in range(size - 1):
        piv = min((i for i in range(k, size) if not A[i][k].is_zero),
                  key=lambda i: len(A[i][k].terms), default=None)
        if piv is None:
            return A[0][0].zero()
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, size):
            aik = A[i][k]
            for j in range(k + 1, size):
                A[i][j] = exquo(A[i][j] * akk - aik * A[k][j], prev)
        prev = akk
    return A[-1][-1].scale(sign)


def det_kronecker(M: list[list[Poly]], grading=None) -> Poly:
    """Determinant of an integer polynomial matrix via Kronecker packing.

    ``grading=(row_deg, col_deg)`` asserts entry (i, j) is homogeneous of
    degree ``row_deg[i] + col_deg[j]``; the determinant is then computed on the
    dehomogenization with respect to one variable and rehomogenized.
    """
    size = len(M)
    if size == 0:
        raise ValueError("empty matrix")
    proto = M[0][0]
    nvars = proto.nvars
    if not all(e.is_integral for r in M for e in r):
        return det_bareiss(M)
    used = sorted({v for r in M for e in r for v in e.used_vars()})

    drop = None
    det_degree = None
    tot_bound = None
    if grading is not None and len(used) >= 2:
        row_deg, col_deg = grading
        drop = used[0]
        used = used[1:]
        det_degree = sum(row_deg) + sum(col_deg)
        tot_bound = max(det_degree, 0)

    # per-variable degree bounds valid for every minor
    bounds = []
    for v in used:
        b = sum(max((e.degree(v) for e in r if not e.is_zero), default=0) for r in M)
        if tot_bound is not None:
            b = min(b, tot_bound)
        bounds.append(b)
    strides, s = [], 1
    for b in bounds:
        strides.append(s)
        s *= b + 1

    coef_bound = 1
    for r in M:
        coef_bound *= max(1, sum(sum(abs(c) for c in e.terms.values()) for e in r))
    B = (coef_bound.bit_length() + 2 + 7) // 8 * 8

    def encode(p: Poly):
        acc = 0
        for e, c in p.terms.items():
            k = sum(e[v] * st for v, st in zip(used, strides))
            acc += c << (B * k)
        return _mpz(acc)

    A = [[encode(e) for e in r] for r in M]
    sign = 1
    prev = _mpz(1)
    for k in range(size - 1):
        piv = min((i for i in range(k, size) if A[i][k]),
                  key=lambda i: abs(A[i][k]).bit_length(), default=None)
        if piv is None:
            return Poly(nvars)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, size):
            rowi = A[i]
            aik = rowi[k]
            if aik:
                for j in range(k + 1, size):
                    rowi[j] = _divexact(rowi[j] * akk - aik * rowk[j], prev)
            elif prev != 1:
                for j in range(k + 1, size):
                    rowi[j] = _divexact(rowi[j] * akk, prev)
            else:
                for j in range(k + 1, size):
                    rowi[j] = rowi[j] * akk
        prev = akk
    value = int(A[-1][-1]) * sign
    if not value:
        return Poly(nvars)

    # unpack balanced base-2**B digits
    nbytes = B // 8
    ndig = (value.bit_length() + B) // B + 1
    half = 1 << (B - 1)
    offset = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * ndig, "little")
    raw = (value + offset).to_bytes(nbytes * ndig, "little")
    terms = {}
    for k in range(ndig):
        d = int.from_bytes(raw[k * nbytes:(k + 1) * nbytes], "little") - half
        if d:
            e = [0] * nvars
            rem = k
            for v, st in zip(reversed(used), reversed(strides)):
                e[v], rem = divmod(rem, st)
            if drop is not None:
                e[drop] = det_degree - sum(e)
            terms[tuple(e)] = d
    return Poly(nvars, terms, _clean=False)


def _sylvester_grading(f: Poly, g: Poly, m: int, n: int):
    if not (f.is_homogeneous and g.is_homogeneous):
        return None
    df, dg = f.total_degree, g.total_degree
    rows = [df - m - i for i in range(n)] + [dg - n - i for i in range(m)]
    return rows, list(range(m + n))


def _resultant_value(det: Poly) -> ResultantValue:
    return ResultantValue(det, det.content() if not det.is_zero else 0)


def _sylvester_det(f: Poly, g: Poly, var: int, m: int, n: int) -> Poly:
    spec = sylvester_spec(f, g, var, m, n)
    return det_kronecker(spec.matrix(), _sylvester_grading(f, g, m, n))


def sylvester_resultant(f: Poly, g: Poly, var: int, m: int, n: int) -> ResultantValue:
    """(m, n)-resultant of ``f`` and ``g`` in ``T{var}``.

    Both inputs are replaced by their primitive parts first, so the content of
    the returned determinant is that of the saturated construction.
    """
    if f.is_zero or g.is_zero:
        raise ValueError("resultant of a zero polynomial")
    f = content_primitive(f)[1]
    g = content_primitive(g)[1]
    return _resultant_value(_sylvester_det(f, g, var, m, n))


def resultant_is_zero(f: Poly, g: Poly, var: int) -> bool:
    """True iff f and g share a factor of positive degree in ``T{var}``."""
    m, n = f.degree(var), g.degree(var)
    if m <= 0 and n <= 0:
        raise ValueError(f"T{var} occurs in neither polynomial")
    return sylvester_resultant(f, g, var, m, n).is_zero_ideal


def derivation_resultants(f: Poly, var: int) -> ResultantValue:
    """(d, d-1)-resultant of ``f`` and its partial derivative in ``T{var}``.

    ``f`` is made primitive; the derivative is used as is.  Its integer
    factor ``d`` (from the leading term) is what exposes primes dividing the
    degree, e.g. p = 2 for ``T1^2 - 5*T0^2``.  For ``d = 1`` the matrix is the
    1x1 matrix of the leading coefficient.
    """
    if f.is_zero:
        raise ValueError("zero polynomial")
    d = f.degree(var)
    if d < 1:
        raise ValueError(f"polynomial has degree 0 in T{var}")
    f = content_primitive(f)[1]
    df = partial_derivative(f, var)
    return _resultant_value(_sylvester_det(f, df, var, d, d - 1))

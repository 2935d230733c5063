"""Sparse exact multivariate polynomials over Q, Z and F_p.

A :class:`Poly` maps exponent tuples to nonzero coefficients.  Coefficients
are Python ``int`` whenever integral and ``fractions.Fraction`` otherwise, so
integer polynomials never pay for rational arithmetic.  Setting ``modulus``
turns the same container into a polynomial over F_p (see ``modp.FpPoly``).

Variables are named ``T0 .. T{nvars-1}``.  Monomial order for display and
sign normalization is graded-lex with ``T0 < T1 < ...``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable

Exp = tuple  # exponent vector


class ParseError(ValueError):
    """Raised on malformed polynomial text; ``pos`` is the 0-based offset."""

    def __init__(self, msg: str, pos: int, text: str = ""):
        super().__init__(f"{msg} at position {pos}" + (f": {text!r}" if text else ""))
        self.pos = pos


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def glex_key(e: Exp):
    """Sort key for graded-lex order with T0 < T1 < ... < Tn."""
    return (sum(e),) + tuple(reversed(e))


class Poly:
    __slots__ = ("nvars", "terms", "modulus", "_hash")

    def __init__(self, nvars: int, terms=None, modulus: int | None = None, _clean=True):
        self.nvars = nvars
        self.modulus = modulus
        self._hash = None
        if terms is None:
            self.terms = {}
        elif not _clean:
            self.terms = terms
        else:
            out = {}
            if modulus is None:
                for e, c in terms.items():
                    if c:
                        if len(e) != nvars:
                            raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                        out[tuple(e)] = _norm_coeff(c)
            else:
                for e, c in terms.items():
                    if isinstance(c, Fraction):
                        c = c.numerator * pow(c.denominator, -1, modulus)
                    c %= modulus
                    if c:
                        out[tuple(e)] = c
            self.terms = out

    # construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, c, nvars: int, modulus: int | None = None) -> "Poly":
        return cls(nvars, {(0,) * nvars: c}, modulus)

    @classmethod
    def var(cls, i: int, nvars: int, modulus: int | None = None) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1}, modulus)

    def _new(self, terms, clean=True) -> "Poly":
        return Poly(self.nvars, terms, self.modulus, _clean=clean)

    def zero(self) -> "Poly":
        return self._new({}, clean=False)

    def one(self) -> "Poly":
        return self._new({(0,) * self.nvars: 1}, clean=False)

    # basic predicates -----------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    @property
    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    @property
    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def degree(self, var: int) -> int:
        """Degree in ``T{var}``; -1 for the zero polynomial."""
        return max((e[var] for e in self.terms), default=-1)

    def degrees(self) -> list[int]:
        return [max((e[i] for e in self.terms), default=0) for i in range(self.nvars)]

    def used_vars(self) -> list[int]:
        return [i for i in range(self.nvars) if any(e[i] for e in self.terms)]

    def constant_value(self):
        if not self.terms:
            return 0
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        return self.terms[(0,) * self.nvars]

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        e = max(self.terms, key=glex_key)
        return e, self.terms[e]

    def content(self) -> int:
        """gcd of the integer coefficients (0 for the zero polynomial)."""
        if not self.is_integral:
            raise ValueError("content() needs integer coefficients")
        return reduce(gcd, self.terms.values(), 0)

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "Poly"):
        if other.nvars != self.nvars or other.modulus != self.modulus:
            raise ValueError("incompatible polynomials")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(other, self.nvars, self.modulus)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) - c
        return self._new(out)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        if not c:
            return self.zero()
        return self._new({e: k * c for e, k in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = get(e, 0) + ca * cb
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = self.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, e: Exp, c=1) -> "Poly":
        return self._new({tuple(x + y for x, y in zip(k, e)): v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.modulus == other.modulus and self.terms == other.terms
        if not self.terms:
            return other == 0
        return self.is_constant and self.constant_value() == other

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.modulus, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        mod = f", mod {self.modulus}" if self.modulus else ""
        return f"Poly({to_string(self)!r}, nvars={self.nvars}{mod})"

    def __str__(self):
        return to_string(self)

    # coefficient-field helpers -------------------------------------------
    def _cdiv(self, a, b):
        if self.modulus is None:
            q = Fraction(a, b) if isinstance(a, int) and isinstance(b, int) else a / b
            return _norm_coeff(q) if isinstance(q, Fraction) else q
        return a * pow(b, -1, self.modulus) % self.modulus

    def monic(self) -> "Poly":
        _, lc = self.leading()
        return self.scale(self._cdiv(1, lc))

    # evaluation -----------------------------------------------------------
    def substitute(self, var: int, value) -> "Poly":
        """Replace ``T{var}`` by a constant."""
        out: dict = {}
        for e, c in self.terms.items():
            k = e[var]
            ne = e[:var] + (0,) + e[var + 1:]
            out[ne] = out.get(ne, 0) + c * value ** k
        return self._new(out)

    def __call__(self, *point):
        return sum(c * _prod(x ** k for x, k in zip(point, e) if k) for e, c in self.terms.items())


def _prod(it):
    r = 1
    for x in it:
        r = r * x
    return r


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>T\d+)|(?P<op>[-+*/^()]))")


def _tokenize(text: str):
    pos, out = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", pos, text)
        start = m.start(m.lastgroup)
        out.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    """Recursive descent.

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := power (('*'|'/') power)*
    power  := atom ['^' INT]
    atom   := INT | Tk | '(' expr ')'

    The documented file format is the flat subset (rational coefficient times a
    product of variable powers); parentheses are accepted as a convenience.
    Division is only allowed by a nonzero constant.
    """

    def __init__(self, text: str, nvars: int):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.nvars = nvars

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return p

    def expr(self) -> Poly:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term().scale(sign)
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Poly:
        acc = self.power()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            rhs = self.power()
            if tok[1] == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant or rhs.is_zero:
                    self.fail("division by a non-constant or zero", tok)
                acc = acc.scale(Fraction(1) / Fraction(rhs.constant_value()))
        return acc

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.fail("exponent must be a nonnegative integer", tok)
            base = base ** int(tok[1])
        return base

    def atom(self) -> Poly:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return Poly.constant(int(val), self.nvars)
        if kind == "var":
            k = int(val[1:])
            if k >= self.nvars:
                raise ParseError(f"variable {val} out of range for {self.nvars} variables", pos, self.text)
            return Poly.var(k, self.nvars)
        if kind == "op" and val == "(":
            inner = self.expr()
            if self.take()[1] != ")":
                self.fail("expected ')'", self.toks[self.i - 1])
            return inner
        self.fail("expected a number, variable or '('", tok)


def infer_nvars(text: str) -> int:
    idx = [int(m) for m in re.findall(r"T(\d+)", text)]
    return max(idx, default=0) + 1


def parse_poly(text: str, nvars: int | None = None) -> Poly:
    """Parse ``text`` into a canonical sparse polynomial.

    ``nvars`` defaults to one more than the largest variable index.  Whether
    the result is homogeneous is available as ``.is_homogeneous``; parsing does
    not reject inhomogeneous input.
    """
    if nvars is None:
        nvars = infer_nvars(text)
    return _Parser(text, nvars).parse()


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def to_string(p: Poly) -> str:
    """Canonical text (graded-lex descending), re-parseable by ``parse_poly``."""
    if p.is_zero:
        return "0"
    parts = []
    for e in sorted(p.terms, key=glex_key, reverse=True):
        c = p.terms[e]
        neg = c < 0 if p.modulus is None else False
        a = -c if neg else c
        mono = "*".join(f"T{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        if not mono:
            body = _fmt_coeff(a)
        elif a == 1:
            body = mono
        elif isinstance(a, Fraction):
            body = f"{a.numerator}*{mono}/{a.denominator}"
        else:
            body = f"{a}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# content, derivatives, univariate views


def content_primitive(p: Poly) -> tuple[Fraction, Poly]:
    """Split ``p = scale * prim`` with ``prim`` integral, content 1, and
    positive graded-lex leading coefficient."""
    if p.is_zero:
        raise ValueError("zero polynomial has no primitive part")
    vals = [Fraction(c) for c in p.terms.values()]
    num = reduce(gcd, (v.numerator for v in vals), 0)
    den = reduce(lcm, (v.denominator for v in vals), 1)
    scale = Fraction(num, den)
    _, lc = p.leading()
    if lc < 0:
        scale = -scale
    prim = Poly(p.nvars, {e: _norm_coeff(Fraction(c) / scale) for e, c in p.terms.items()}, _clean=False)
    return scale, prim


def primitive(p: Poly) -> Poly:
    return content_primitive(p)[1]


def partial_derivative(p: Poly, var: int) -> Poly:
    if not 0 <= var < p.nvars:
        raise IndexError(f"variable index {var} out of range")
    out = {}
    for e, c in p.terms.items():
        k = e[var]
        if k:
            out[e[:var] + (k - 1,) + e[var + 1:]] = c * k
    return p._new(out)


def as_univariate(p: Poly, var: int) -> list[Poly]:
    """Coefficients ``[t_0, ..., t_d]`` of ``p`` viewed as a polynomial in
    ``T{var}``; each ``t_i`` is free of ``T{var}`` (same ``nvars``)."""
    if p.is_zero:
        raise ValueError("zero polynomial")
    d = p.degree(var)
    buckets: list[dict] = [{} for _ in range(d + 1)]
    for e, c in p.terms.items():
        buckets[e[var]][e[:var] + (0,) + e[var + 1:]] = c
    return [p._new(b, clean=False) for b in buckets]


def from_univariate(coeffs: Iterable[Poly], var: int) -> Poly:
    coeffs = list(coeffs)
    p = coeffs[0]
    out: dict = {}
    for i, t in enumerate(coeffs):
        for e, c in t.terms.items():
            ne = e[:var] + (e[var] + i,) + e[var + 1:]
            out[ne] = out.get(ne, 0) + c
    return p._new(out)


def dehomogenize(p: Poly, var: int) -> Poly:
    return p.substitute(var, 1)


# ---------------------------------------------------------------------------
# exact division and gcd


class NotDivisible(ArithmeticError):
    pass


def exquo(a: Poly, b: Poly) -> Poly:
    """Exact quotient ``a / b``; raises :class:`NotDivisible` otherwise."""
    if b.is_zero:
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero:
        return a.zero()
    if b.is_constant:
        c = b.constant_value()
        return a._new({e: a._cdiv(v, c) for e, v in a.terms.items()})
    eb = max(b.terms)
    cb = b.terms[eb]
    rest = [(e, c) for e, c in b.terms.items() if e != eb]
    r = dict(a.terms)
    q: dict = {}
    mod = a.modulus
    while r:
        er = max(r)
        cr = r.pop(er)
        de = tuple(x - y for x, y in zip(er, eb))
        if min(de) < 0:
            raise NotDivisible("leading monomial not divisible")
        t = a._cdiv(cr, cb)
        q[de] = t
        for e, c in rest:
            ne = tuple(x + y for x, y in zip(e, de))
            v = r.get(ne, 0) - t * c
            if mod is not None:
                v %= mod
            if v:
                r[ne] = v
            else:
                r.pop(ne, None)
    return a._new(q)


def divides(b: Poly, a: Poly) -> bool:
    try:
        exquo(a, b)
        return True
    except NotDivisible:
        return False


def normalize(p: Poly) -> Poly:
    """Canonical associate: primitive integral with positive leading
    coefficient over Q, monic over F_p."""
    if p.is_zero:
        return p
    if p.modulus is not None:
        return p.monic()
    return content_primitive(p)[1]


def _lc_in(p: Poly, var: int) -> Poly:
    return as_univariate(p, var)[-1]


def prem(a: Poly, b: Poly, var: int) -> Poly:
    """Pseudo-remainder of ``a`` by ``b`` in ``T{var}``."""
    db = b.degree(var)
    lb = _lc_in(b, var)
    e = a.degree(var) - db + 1
    r = a
    while not r.is_zero and r.degree(var) >= db:
        k = r.degree(var) - db
        lr = _lc_in(r, var)
        shift = [0] * a.nvars
        shift[var] = k
        r = lb * r - (lr * b).mul_monomial(tuple(shift))
        e -= 1
    return (lb ** e) * r if e > 0 else r


def content_in(p: Poly, var: int) -> Poly:
    """gcd of the coefficients of ``p`` in ``T{var}`` (normalized)."""
    g = p.zero()
    for t in reversed(as_univariate(p, var)):
        if t.is_zero:
            continue
        g = gcd_poly(g, t)
        if g.is_constant:
            return g.one()
    return g


def _prs_gcd(a: Poly, b: Poly, var: int) -> Poly:
    """gcd of two polynomials primitive in ``T{var}`` via the subresultant PRS."""
    if a.degree(var) < b.degree(var):
        a, b = b, a
    g = h = a.one()
    while True:
        delta = a.degree(var) - b.degree(var)
        r = prem(a, b, var)
        if r.is_zero:
            break
        if r.degree(var) == 0:
            return a.one()
        a, b = b, exquo(r, g * h ** delta)
        g = _lc_in(a, var)
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = exquo(g ** delta, h ** (delta - 1))
    return normalize(exquo(b, content_in(b, var)))


def gcd_poly(a: Poly, b: Poly) -> Poly:
    """Normalized gcd over the coefficient field (Q or F_p)."""
    a._check(b)
    if a.is_zero:
        return normalize(b)
    if b.is_zero:
        return normalize(a)
    if a.is_constant or b.is_constant:
        return a.one()
    if a.modulus is None:
        a, b = primitive(a), primitive(b)
    ua, ub = set(a.used_vars()), set(b.used_vars())
    var = max(ua | ub)
    if var not in ub:
        return gcd_poly(content_in(a, var), b)
    if var not in ua:
        return gcd_poly(a, content_in(b, var))
    ca, cb = content_in(a, var), content_in(b, var)
    c = gcd_poly(ca, cb)
    pa, pb = exquo(a, ca), exquo(b, cb)
    return normalize(c * _prs_gcd(pa, pb, var))


def gcd_rational(f: Poly, g: Poly) -> Poly:
    """gcd over Q[T0..Tn], returned primitive with positive leading coefficient."""
    if f.modulus is not None or g.modulus is not None:
        raise ValueError("gcd_rational expects rational polynomials")
    if f.is_zero or g.is_zero:
        raise ValueError("gcd_rational expects nonzero inputs")
    return gcd_poly(f, g)


def is_squarefree_rational(f: Poly) -> bool:
    """True iff ``f`` has no repeated factor over Q (char 0: gcd with all
    partials is constant)."""
    if f.is_zero:
        raise ValueError("zero polynomial")
    g = f
    for v in f.used_vars():
        g = gcd_poly(g, partial_derivative(f, v))
        if g.is_constant:
            return True
    return g.is_constant

import random
from itertools import permutations
from math import comb

import pytest

from badred.corpus import random_form, random_hypersurfaces
from badred.heights import classical_height
from badred.polycore import Poly, content_primitive, gcd_rational, parse_poly
from badred.resultant import (
    SylvesterSpec,
    _sylvester_grading,
    derivation_resultants,
    det_bareiss,
    det_kronecker,
    resultant_is_zero,
    sylvester_resultant,
    sylvester_spec,
)


def P(text, nvars=2):
    return parse_poly(text, nvars)


def leibniz(M):
    """Determinant by the permutation expansion (independent oracle)."""
    size = len(M)
    total = M[0][0].zero()
    for perm in permutations(range(size)):
        inv = sum(1 for i in range(size) for j in range(i + 1, size) if perm[i] > perm[j])
        term = M[0][0].one()
        for i, j in enumerate(perm):
            term = term * M[i][j]
            if term.is_zero:
                break
        total = total + (term if inv % 2 == 0 else -term)
    return total


# symbolic coefficients a..e are T0..T4, the eliminated variable X is T5
SYM = {k: Poly.var(i, 6) for i, k in enumerate("abcde")}
X = Poly.var(5, 6)


def test_symbolic_identity():
    a, b, c, d, e = (SYM[k] for k in "abcde")
    f = a * X ** 2 + b * X + c
    g = d * X + e
    res = sylvester_resultant(f, g, 5, 2, 1)
    assert res.det == a * e ** 2 + c * d ** 2 - b * d * e


def test_padded_degrees_give_zero_ideal():
    a, b, c, d, e = (SYM[k] for k in "abcde")
    res = sylvester_resultant(a * X ** 2 + b * X + c, d * X + e, 5, 3, 2)
    assert res.is_zero_ideal and res.content == 0


def test_hand_expanded_3x3():
    f = P("T1^2 + 3*T0*T1 + 2*T0^2")
    res = sylvester_resultant(f, P("2*T1 + 3*T0"), 1, 2, 1)
    assert res.det == P("-T0^2") and res.content == 1


def test_matrix_layout():
    spec = sylvester_spec(P("T1^2 - 5*T0^2"), P("2*T1"), 1, 2, 1)
    M = spec.matrix()
    assert M == [[P("1"), P("0"), P("-5*T0^2")],
                 [P("2"), P("0"), P("0")],
                 [P("0"), P("2"), P("0")]]


def test_spec_validation():
    z = P("1")
    with pytest.raises(ValueError):
        SylvesterSpec((z,), (z,), 0, 0)
    with pytest.raises(ValueError):
        SylvesterSpec((z, z), (z,), 2, 0)
    with pytest.raises(ValueError):
        sylvester_resultant(P("T1^3"), P("T1"), 1, 2, 1)
    with pytest.raises(ValueError):
        sylvester_resultant(P("0"), P("T1"), 1, 1, 1)


class TestDerivation:
    def test_worked_example(self):
        res = derivation_resultants(P("T1^2 - 5*T0^2"), 1)
        assert res.det == P("-20*T0^2") and res.content == 20

    def test_linear_convention(self):
        res = derivation_resultants(P("T0*T1"), 1)
        assert res.det == P("T0") and res.content == 1

    def test_square_factor_gives_zero(self):
        assert derivation_resultants(P("(T0+T1)^2"), 1).is_zero_ideal

    def test_degree_zero_rejected(self):
        with pytest.raises(ValueError):
            derivation_resultants(P("T0^2"), 1)


class TestIsZero:
    def test_examples(self):
        assert resultant_is_zero(P("(T0+T1)*T1"), P("(T0+T1)*T0"), 1)
        assert not resultant_is_zero(P("T1^2 - 5*T0^2"), P("2*T1"), 1)
        assert resultant_is_zero(P("T1"), P("T1"), 1)

    def test_absent_variable(self):
        with pytest.raises(ValueError):
            resultant_is_zero(P("T0"), P("T0^2"), 1)

    def test_against_gcd(self):
        rng = random.Random(5)
        for i in range(60):
            nv = rng.randint(2, 3)
            f = random_form(rng, nv, rng.randint(1, 3), 9)
            g = random_form(rng, nv, rng.randint(1, 3), 9)
            if i % 2 == 0:
                h = random_form(rng, nv, 1, 9)
                f, g = f * h, g * h
            v = rng.choice(sorted(set(f.used_vars()) | set(g.used_vars())))
            expect = gcd_rational(f, g).degree(v) >= 1
            assert resultant_is_zero(f, g, v) == expect


class TestDeterminantPaths:
    def test_random_matrices_three_ways(self):
        rng = random.Random(9)
        for _ in range(40):
            size = rng.randint(1, 4)
            nv = rng.randint(1, 3)
            M = [[random_form(rng, nv, rng.randint(0, 2), 9) if rng.random() < 0.8 else Poly(nv)
                  for _ in range(size)] for _ in range(size)]
            ref = leibniz(M)
            assert det_bareiss(M) == ref
            assert det_kronecker(M) == ref

    def test_graded_path_matches_reference(self):
        rng = random.Random(10)
        for _ in range(60):
            nv = rng.randint(2, 4)
            f = random_form(rng, nv, rng.randint(1, 4), 99)
            g = random_form(rng, nv, rng.randint(1, 3), 99)
            v = rng.choice(f.used_vars())
            m, n = f.degree(v), max(g.degree(v), 0)
            if m + n == 0:
                continue
            spec = sylvester_spec(f, g, v, m, n)
            M = spec.matrix()
            assert det_kronecker(M, _sylvester_grading(f, g, m, n)) == det_bareiss(M)

    def test_root_product_oracle(self):
        # Res(a*prod(x - r_i), b*prod(x - s_j)) = a^n b^m prod(r_i - s_j)
        rng = random.Random(12)
        for _ in range(50):
            r = [rng.randint(-9, 9) for _ in range(rng.randint(1, 4))]
            s = [rng.randint(-9, 9) for _ in range(rng.randint(1, 4))]
            a, b = rng.choice([-3, -1, 1, 2, 5]), rng.choice([-2, 1, 3])
            x = Poly.var(0, 1)
            f, g = Poly.constant(a, 1), Poly.constant(b, 1)
            for ri in r:
                f = f * (x - ri)
            for sj in s:
                g = g * (x - sj)
            m, n = len(r), len(s)
            expect = a ** n * b ** m
            for ri in r:
                for sj in s:
                    expect *= ri - sj
            M = sylvester_spec(f, g, 0, m, n).matrix()
            assert det_kronecker(M).constant_value() == expect
            # homogenized: T1 - r*T0, with the T0-power fixed by the grading
            t0, t1 = Poly.var(0, 2), Poly.var(1, 2)
            F, G = Poly.constant(a, 2), Poly.constant(b, 2)
            for ri in r:
                F = F * (t1 - t0.scale(ri))
            for sj in s:
                G = G * (t1 - t0.scale(sj))
            M = sylvester_spec(F, G, 1, m, n).matrix()
            assert det_kronecker(M, _sylvester_grading(F, G, m, n)) == Poly(2, {(m * n, 0): expect})

    def test_row_scaling_covariance(self):
        rng = random.Random(13)
        for _ in range(20):
            f = random_form(rng, 3, rng.randint(2, 4), 20)
            g = random_form(rng, 3, rng.randint(1, 3), 20)
            v = 2
            m, n = f.degree(v), g.degree(v)
            if m < 1 or n < 1:
                continue
            c = rng.choice([2, 3, -7])
            base = det_kronecker(sylvester_spec(f, g, v, m, n).matrix())
            scaled = det_kronecker(sylvester_spec(f.scale(c), g, v, m, n).matrix())
            assert scaled == base.scale(c ** n)


def test_content_bound():
    # content <= H^(2d-1) * C(d+n, n)^((2d-1)/2) * d^d, compared squared and exactly
    for f in random_hypersurfaces(40, 21, n_range=(1, 2), deg_range=(2, 4)):
        n = f.nvars - 1
        for v in f.used_vars():
            d = f.degree(v)
            if d < 2:
                continue
            res = derivation_resultants(f, v)
            H = int(classical_height(f).witness)
            lhs = res.content ** 2
            rhs = H ** (2 * (2 * d - 1)) * comb(d + n, n) ** (2 * d - 1) * d ** (2 * d)
            assert lhs <= rhs


def test_primitivization_removes_content():
    f = P("T1^2 + 3*T0*T1 + 2*T0^2")
    a = sylvester_resultant(f.scale(6), P("4*T1 + 6*T0"), 1, 2, 1)
    b = sylvester_resultant(f, P("2*T1 + 3*T0"), 1, 2, 1)
    assert a == b
    assert content_primitive(a.det)[1] == P("T0^2")

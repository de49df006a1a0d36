from fractions import Fraction
import random

import pytest
from hypothesis import given, strategies as st

from realqe.arith import (
    DegreeTooHigh, Poly, cauchy_root_bound, count_roots, discriminant, exponent_gcd,
    poly_arith, poly_sqrt, quad_view, resultant, sturm_isolate, sturm_sequence,
    up_eval, up_squarefree,
)
from conftest import a, x, y


def test_poly_arith_examples():
    assert poly_arith("add", x ** 2, 4 * x) == x ** 2 + 4 * x
    assert poly_arith("mul", x - 1, x + 1) == x ** 2 - 1
    assert poly_arith("pow", 3 * x, 2) == 9 * x ** 2
    assert poly_arith("neg", x) == -x
    assert poly_arith("sub", x, x).is_zero()


def test_derivative_examples():
    f = x ** 3 + x ** 2 - x - 1
    assert f.derivative("x", 1) == 3 * x ** 2 + 2 * x - 1
    assert f.derivative("x", 2) == 6 * x + 2
    assert (a + 7).derivative("x", 1).is_zero()


def test_quad_view():
    assert quad_view(a * y + 3 * x ** 2 + 4 * x - a, "x") == (Poly.const(3), Poly.const(4), a * y - a)
    assert quad_view(x - a, "x") == (Poly.const(0), Poly.const(1), -a)
    with pytest.raises(DegreeTooHigh):
        quad_view(x ** 3, "x")


def test_discriminant():
    assert discriminant(Poly.const(1), Poly.const(0), Poly.const(-2)) == Poly.const(8)
    assert discriminant(Poly.const(0), Poly.const(1), Poly.const(5)) == Poly.const(1)
    d = discriminant(Poly.const(3), Poly.const(4), -a * (1 + y))
    assert d == 16 + 12 * a * (1 + y)


def test_sturm_isolate_examples():
    ivs = sturm_isolate((-2, 0, 1))
    assert len(ivs) == 2
    (l1, h1), (l2, h2) = ivs
    # -sqrt(2) in the first, sqrt(2) in the second
    assert l1 < Fraction(-15, 10) and Fraction(-14, 10) < h1 <= l2 < Fraction(14, 10)
    assert h2 > Fraction(15, 10)
    (l, h), = sturm_isolate((1, 32))
    assert l < Fraction(-1, 32) < h
    assert sturm_isolate((1, 0, 1)) == []


def test_cauchy_bound():
    assert cauchy_root_bound((-2, 0, 1)) == 3
    assert cauchy_root_bound((-7, 2)) == Fraction(9, 2)
    assert cauchy_root_bound((0, 1)) == 1


def test_resultant_examples():
    r = resultant(y ** 2 - 2, x - y, "y")
    assert r == x ** 2 - 2 or r == -(x ** 2 - 2)
    r = resultant(y - 3, x - 2 * y, "y")
    assert r.primitive() in (x - 6, -(x - 6))
    assert resultant(y, y, "y").is_zero()


def test_exponent_gcd_and_sqrt():
    assert exponent_gcd(x ** 4 - 3 * x ** 2 + 2, "x") == 2
    assert exponent_gcd(a, "x") == 0
    assert poly_sqrt(4 * a ** 2 + 4 * a + 1) == 2 * a + 1
    assert poly_sqrt(a ** 2 + 1) is None


small = st.integers(-4, 4)
monos = st.sampled_from([Poly.const(1), x, y, a, x * y, x ** 2, a * x, y ** 2])


@st.composite
def polys(draw):
    p = Poly.const(0)
    for _ in range(draw(st.integers(0, 4))):
        p = p + draw(small) * draw(monos)
    return p


@given(polys(), polys(), polys())
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r


@given(polys(), polys())
def test_derivative_rules(p, q):
    d = lambda f: f.derivative("x", 1)
    assert d(p + q) == d(p) + d(q)
    assert d(p * q) == d(p) * q + p * d(q)


@given(polys(), st.fractions(max_denominator=5), st.fractions(max_denominator=5),
       st.fractions(max_denominator=5))
def test_quad_view_recomposes(p, xv, yv, av):
    if p.degree("x") > 2:
        return
    f2, f1, f0 = quad_view(p, "x")
    pt = {"x": xv, "y": yv, "a": av}
    assert (f2 * x ** 2 + f1 * x + f0).evaluate(pt) == p.evaluate(pt)


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=6))
def test_sturm_isolation_properties(coeffs):
    p = tuple(coeffs)
    while p and p[-1] == 0:
        p = p[:-1]
    if len(p) < 2:
        return
    sq = up_squarefree(p)
    ivs = sturm_isolate(sq)
    for lo, hi in ivs:
        assert up_eval(sq, lo) * up_eval(sq, hi) < 0 or count_roots(sturm_sequence(sq), lo, hi) == 1
        assert up_eval(sq, lo) != 0 and up_eval(sq, hi) != 0
    B = cauchy_root_bound(sq)
    assert len(ivs) == count_roots(sturm_sequence(sq), -B, B)


def _det(m):
    m = [[Fraction(v) for v in row] for row in m]
    n, det = len(m), Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            for k in range(i, n):
                m[r][k] -= f * m[i][k]
    return det


def sylvester_resultant(p, q):
    """p, q: coefficient lists, highest degree first."""
    m, n = len(p) - 1, len(q) - 1
    rows = []
    for i in range(n):
        rows.append([0] * i + list(p) + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(q) + [0] * (m - 1 - i))
    return _det(rows)


def test_resultant_matches_sylvester():
    rng = random.Random(7)
    for _ in range(40):
        p = sum((rng.randint(-3, 3) + rng.randint(-2, 2) * x) * y ** k for k in range(3)) + y ** 3
        q = sum((rng.randint(-3, 3) + rng.randint(-2, 2) * x) * y ** k for k in range(2)) + 2 * y ** 2
        x0 = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        res = resultant(p, q, "y").evaluate({"x": x0})
        pc = [c.evaluate({"x": x0}) for c in reversed(p.coeff_list("y"))]
        qc = [c.evaluate({"x": x0}) for c in reversed(q.coeff_list("y"))]
        assert res == sylvester_resultant(pc, qc)

from fractions import Fraction
import random

import pytest
from hypothesis import given, strategies as st

from realqe.arith import sturm_isolate, up_eval, up_mul, up_squarefree, up_trim
from realqe.realalg import (
    AlgebraicError, RealAlgebraicNumber, approx_decimal, eval_poly_at_rans, ran_arith,
    ran_compare_rational, ran_equal, ran_from_root, ran_nthroot, ran_pow, ran_sign,
    ran_sqrt, rational_recognition, refine,
)
from conftest import x, y

R = RealAlgebraicNumber.from_rational
SQRT2 = ran_from_root((-2, 0, 1), (1, 2))


def test_ran_from_root_examples():
    h = ran_from_root((0, 1), (-1, 1))
    assert h.defining == (0, 1) and (h.lo, h.hi) == (-1, 1)
    r = ran_from_root((1, 32), (Fraction(-1, 16), Fraction(1, 16)))
    assert r.rational_value() == Fraction(-1, 32)
    assert SQRT2.defining == (-2, 0, 1)
    assert ran_from_root((-2, 0, 1), 1).compare_rational(1) > 0
    with pytest.raises(AlgebraicError):
        ran_from_root((-2, 0, 1), (2, 3))


def test_from_rational_interval():
    assert (R(0).lo, R(0).hi) == (-1, 1)
    r = R(Fraction(-9, 256))
    assert (r.lo, r.hi) == (Fraction(-10, 256), Fraction(10, 256))


def test_arith_examples():
    assert ran_arith("add", SQRT2, -SQRT2).sign() == 0
    assert rational_recognition(ran_arith("mul", SQRT2, SQRT2)) == 2
    n = ran_arith("nthroot", R(9), g=9)
    assert n.defining == (-9, 0, 0, 0, 0, 0, 0, 0, 0, 1)
    assert n.compare_rational(1) > 0


def test_sign_and_compare():
    assert ran_sign(SQRT2) == 1
    assert ran_compare_rational(R(Fraction(-1, 32)), Fraction(-1, 32)) == 0
    assert ran_sign(ran_arith("add", SQRT2, R(Fraction(-3, 2)))) == -1


def test_refine_examples():
    r = refine(SQRT2)
    assert (r.lo, r.hi) == (1, Fraction(3, 2))
    q = refine(R(Fraction(1, 3)))
    assert q.width() < R(Fraction(1, 3)).width() and q.lo < Fraction(1, 3) < q.hi
    s = SQRT2
    for _ in range(20):
        s = refine(s)
    assert s.width() <= Fraction(1, 2 ** 20)
    assert up_eval(s.defining, s.lo) * up_eval(s.defining, s.hi) < 0


def test_rational_recognition_examples():
    assert rational_recognition(ran_from_root((-2, 3), (0, 1))) == Fraction(2, 3)
    assert rational_recognition(SQRT2) is None
    assert rational_recognition(ran_from_root((9, 256), (-1, 1))) == Fraction(-9, 256)


def test_eval_poly_examples():
    assert eval_poly_at_rans(x + y, {"x": SQRT2, "y": -SQRT2}).sign() == 0
    assert rational_recognition(eval_poly_at_rans(x ** 2, {"x": SQRT2})) == 2
    v = eval_poly_at_rans(3 * x ** 2 + 2 * x, {"x": Fraction(-1, 32)})
    assert v.rational_value() == Fraction(-61, 1024) and v.sign() == -1


def test_approx_decimal_examples():
    r = ran_from_root((-4, -3, 3), 0)
    assert approx_decimal(r, 6) == "-0.758306"
    assert approx_decimal(R(Fraction(-9, 256)), 4) == "-0.0352"
    assert approx_decimal(R(0), 4) == "0.0000"


fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@given(fracs, fracs)
def test_field_ops_on_rationals(p, q):
    X, Y = R(p), R(q)
    assert rational_recognition(ran_arith("add", X, Y)) == p + q
    assert rational_recognition(ran_arith("sub", X, Y)) == p - q
    assert rational_recognition(ran_arith("mul", X, Y)) == p * q
    assert rational_recognition(ran_arith("neg", X)) == -p
    if q:
        assert rational_recognition(ran_arith("div", X, Y)) == p / q


@given(st.fractions(min_value=0, max_value=30, max_denominator=7), st.integers(2, 5))
def test_roots_invert_powers(q, g):
    X = R(q)
    assert ran_equal(ran_pow(ran_sqrt(X), 2), X)
    assert ran_equal(ran_pow(ran_nthroot(X, g), g), X)


def test_irrational_arithmetic_consistency():
    s3 = ran_sqrt(R(3))
    total = ran_arith("add", SQRT2, s3)
    # (sqrt2 + sqrt3)^2 = 5 + 2 sqrt6
    lhs = ran_pow(total, 2)
    rhs = ran_arith("add", R(5), ran_arith("mul", R(2), ran_sqrt(R(6))))
    assert ran_equal(lhs, rhs)
    assert not ran_equal(SQRT2, s3)


def brute_rational_roots(p):
    a0 = next(c for c in p if c != 0)
    lead = p[-1]
    divs = lambda n: [d for d in range(1, abs(n) + 1) if n % d == 0]
    out = set()
    if p[0] == 0:
        out.add(Fraction(0))
    for u in divs(a0):
        for v in divs(lead):
            for s in (1, -1):
                r = Fraction(s * u, v)
                if up_eval(p, r) == 0:
                    out.add(r)
    return out


def test_rational_recognition_vs_bruteforce():
    rng = random.Random(21)
    for _ in range(200):
        num, den = rng.randint(-9, 9), rng.randint(1, 6)
        planted = (-num, den)
        other = up_trim([rng.randint(-5, 5) for _ in range(rng.randint(1, 3))]) or (1,)
        if len(other) == 1 and other[0] == 0:
            other = (1,)
        p = up_mul(planted, other)
        roots = brute_rational_roots(p)
        for i in range(len(sturm_isolate(up_squarefree(p)))):
            r = ran_from_root(p, i)
            got = rational_recognition(r)
            if got is None:
                assert not any(r.compare_rational(q) == 0 for q in roots)
            else:
                assert got in roots and r.compare_rational(got) == 0


@given(st.integers(2, 7), st.integers(1, 8))
def test_approx_decimal_certificate(n, d):
    r = ran_sqrt(R(n))
    s = Fraction(approx_decimal(r, d))
    assert r.compare_rational(s - Fraction(1, 10 ** d)) > 0
    assert r.compare_rational(s + Fraction(1, 10 ** d)) < 0

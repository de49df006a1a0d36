from fractions import Fraction
import random

import pytest

from realqe.formula import ExistsBlock, fix_parameters, parse
from realqe.oracle import (
    DNFTooLarge, NonLinearError, check_satisfaction, fourier_motzkin_decide,
    univariate_sample_decide,
)
from realqe.realalg import ran_from_root, ran_sqrt, RealAlgebraicNumber
from conftest import random_linear_block, random_univariate_block

STRICT = "(exists (x y) (and (< (+ (* a y) (* 3 x x) (* 4 x)) 0) (> x y) (> y a)))"
QUAD = "(exists (x y) (and (<= (+ (* a y) (* 3 (^ x 2)) (* 4 x)) a) (>= x a) (>= a y)))"


def test_fm_examples():
    assert fourier_motzkin_decide(parse("(exists (x) (and (> x 0) (< x 1)))"))
    assert not fourier_motzkin_decide(parse("(exists (x) (and (< x 0) (> x 1)))"))
    assert not fourier_motzkin_decide(parse("(exists (x y) (and (< x y) (< y x)))"))
    assert fourier_motzkin_decide(parse("(exists (x y) (and (<= x y) (<= y x) (!= x 1)))"))
    with pytest.raises(NonLinearError):
        fourier_motzkin_decide(parse("(exists (x) (< (* x x) 1))"))


def test_fm_dnf_cap(monkeypatch):
    monkeypatch.setenv("REALQE_MAX_DNF", "2")
    with pytest.raises(DNFTooLarge):
        fourier_motzkin_decide(parse("(exists (x y) (and (!= x 1) (!= y 2)))"))


def test_univariate_examples():
    assert univariate_sample_decide(parse("(exists (x) (<= (- (* x x) 2) 0))"))
    assert not univariate_sample_decide(parse("(exists (x) (<= (+ (* x x) 1) 0))"))
    assert univariate_sample_decide(
        parse("(exists (x) (and (< (+ (* 3 x x) (* 2 x)) 0) (> (+ x 2) 0)))"))
    assert univariate_sample_decide(parse("(exists (x) (= (- (* x x) 2) 0))"))
    assert not univariate_sample_decide(
        parse("(exists (x) (and (> (- (* x x) 2) 0) (< (- (* x x) 3) 0) (= (* x x x) 8)))"))


def test_check_satisfaction_examples():
    m4 = fix_parameters(parse(STRICT), {"a": -2}).matrix
    assert check_satisfaction(m4, {"y": Fraction(-9, 256), "x": Fraction(-1, 32)})
    xv = Fraction(-1, 32)
    assert not check_satisfaction(m4, {"x": xv, "y": 2 * xv})
    # x = (sqrt7 - 4)/6 at a = y = -1/2
    s7 = ran_sqrt(RealAlgebraicNumber.from_rational(7))
    xr = (s7 - 4) / 6
    m2 = parse(QUAD).matrix
    h = Fraction(-1, 2)
    assert check_satisfaction(m2, {"x": xr, "y": h, "a": h})
    with pytest.raises(KeyError):
        check_satisfaction(m2, {"x": 0})


def test_oracles_agree_on_linear_univariate():
    rng = random.Random(41)
    n = 0
    for _ in range(200):
        blk = random_linear_block(rng, nvars=1)
        if len(blk.quantified) != 1:
            continue
        assert fourier_motzkin_decide(blk) == univariate_sample_decide(blk)
        n += 1
    assert n > 100

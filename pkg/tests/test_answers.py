from fractions import Fraction
import random

import pytest

from realqe.arith import Poly
from realqe.formula import FALSE, TRUE, Atom, ExistsBlock, fix_parameters, parse
from realqe.answers import (
    AllRowsFalse, MalformedPoint, PreconditionParametric, eps_nudge, pick_row, solve,
    standard_answers, standard_row,
)
from realqe.qe import Entry, PreEQR, PreEQRRow, eliminate
from realqe.realalg import formula_holds
from realqe.vs import Root, RootExpression, RootMinusEps
from conftest import random_linear_block, random_univariate_block, x

STRICT = "(exists (x y) (and (< (+ (* a y) (* 3 x x) (* 4 x)) 0) (> x y) (> y a)))"
QUAD = "(exists (x y) (and (<= (+ (* a y) (* 3 (^ x 2)) (* 4 x)) a) (>= x a) (>= a y)))"


def values(row):
    return {v: ans.rational for v, ans in row.answers.items()}


def test_strict_fixed_answers_satisfy():
    blk = fix_parameters(parse(STRICT), {"a": -2})
    pre = eliminate(blk)
    row = standard_answers(pre, pick_row(pre))
    vals = values(row)
    assert formula_holds(blk.matrix, vals)
    # documented bisection strategy: first endpoint that works
    assert vals == {"y": Fraction(-9, 16), "x": Fraction(-1, 2)}
    assert vals["x"] < 0 and vals["y"] < vals["x"]


def test_infinity_integer_heuristic():
    blk = parse("(exists (x a) (< x a))")
    (row,) = solve(blk, {"x": 2})
    assert values(row) == {"a": 3}
    (row,) = solve(blk, {"x": 4})
    assert values(row)["a"] > 4


def test_root_only_row_keeps_guards():
    blk = parse("(exists (x y) (and (= (- (* x x) 2) 0) (= (- y x) 0)))")
    pre = eliminate(blk)
    row_ix = pick_row(pre)
    row = standard_answers(pre, row_ix)
    src = pre.rows[row_ix]
    assert [(e.var, e.guard, e.point) for e in src.entries] == row.corrected
    x_ans = row.answers["x"]
    assert x_ans.rational is None and formula_holds(blk.matrix, {"x": x_ans.value, "y": x_ans.value})


def _sqrt2_row(blk):
    pre = eliminate(blk)
    for i, r in enumerate(pre.rows):
        p = r.entries[0].point
        if r.condition == TRUE and isinstance(p, Root) and p.expr.b == Poly.const(1):
            return pre, i
    raise AssertionError("no root row")


def test_nudge_fails_for_equation():
    pre, i = _sqrt2_row(parse("(exists (x) (= (- (* x x) 2) 0))"))
    assert eps_nudge(pre, i, 0) is None


def test_nudge_succeeds_for_weak_inequality():
    blk = parse("(exists (x) (<= (- (* x x) 2) 0))")
    pre, i = _sqrt2_row(blk)
    new = eps_nudge(pre, i, 0)
    assert new is not None and isinstance(new.entries[0].point, RootMinusEps)
    out = standard_row(new, blk.matrix, blk.quantified)
    q = out.answers["x"].rational
    assert q is not None and q * q < 2


def test_nudge_quadratic_boundary_case_recorded():
    # at a = -0.7525 the second-row root is checked by the substitution test
    blk = fix_parameters(parse(QUAD), {"a": Fraction("-0.7525")})
    pre = eliminate(blk)
    outcomes = []
    for i, r in enumerate(pre.rows):
        if r.condition != TRUE:
            continue
        for k, e in enumerate(r.entries):
            if isinstance(e.point, Root) and e.point.expr.b != Poly.const(0):
                outcomes.append(eps_nudge(pre, i, k) is not None)
    assert outcomes  # the decision itself is data, not an expectation


def test_pick_row():
    e = (Entry("x", TRUE, Root(RootExpression.of(0))),)
    pre = PreEQR([PreEQRRow(FALSE, e, (Atom(x, "="), FALSE)),
                  PreEQRRow(TRUE, e, (Atom(x, "="), TRUE))], ("x",), Atom(x, "="))
    assert pick_row(pre) == 1
    with pytest.raises(AllRowsFalse):
        pick_row(PreEQR([], ("x",), Atom(x, "=")))
    pre_s = eliminate(fix_parameters(parse(STRICT), {"a": -2}))
    assert pre_s.rows[pick_row(pre_s)].condition == TRUE


def test_errors():
    with pytest.raises(PreconditionParametric) as ei:
        solve(parse(STRICT))
    assert ei.value.parameters == ("a",)
    row = PreEQRRow(TRUE, (Entry("x", TRUE, object()),), (TRUE, TRUE))
    with pytest.raises(MalformedPoint):
        standard_row(row, TRUE, ("x",))
    with pytest.raises(AllRowsFalse):
        solve(parse("(exists (x) (< (* x x) 0))"))


def test_end_to_end_soundness_small():
    rng = random.Random(31)
    for _ in range(60):
        for blk in (random_linear_block(rng), random_univariate_block(rng)):
            try:
                rows = solve(blk, all_rows=True)
            except AllRowsFalse:
                continue
            for r in rows:
                pt = {v: ans.value for v, ans in r.answers.items()}
                assert formula_holds(blk.matrix, pt)
                assert all(ans.expr.is_standard() for ans in r.answers.values())


def test_determinism():
    blk = fix_parameters(parse(QUAD), {"a": Fraction(-1, 2)})
    one = [{v: str(a.value) for v, a in r.answers.items()} for r in solve(blk, all_rows=True)]
    two = [{v: str(a.value) for v, a in r.answers.items()} for r in solve(blk, all_rows=True)]
    assert one == two


def test_degree_shift_answers_use_nth_roots():
    blk = parse("(exists (x) (= (- (* x x x x) 9) 0))")
    (row,) = solve(blk)
    v = row.answers["x"].value
    assert formula_holds(blk.matrix, {"x": v})
    assert "sqrt" in str(row.answers["x"].expr) or "root" in str(row.answers["x"].expr)

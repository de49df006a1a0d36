from fractions import Fraction
import random

from realqe.arith import Poly, cauchy_root_bound, sturm_isolate, up_squarefree, up_trim
from realqe.formula import (
    FALSE, TRUE, And, Atom, ExistsBlock, Or, evaluate_ground, fix_parameters, mk_and,
    mk_or, parse, simplify,
)
from realqe.oracle import univariate_sample_decide
from realqe.realalg import (
    RealAlgebraicNumber, formula_holds, ran_add, ran_compare_rational, ran_div,
    ran_mul, ran_sqrt,
)
from realqe.vs import (
    PLUS_INF, GuardedTestPoint, PlusInfinity, Root, RootExpression, RootMinusEps,
    VarMinusEps, degree_shift, elimination_set, substitute_point, vs_eps, vs_formula,
    vs_inf, vs_root,
)
from conftest import RELS, a, b, c, x, y

t = Poly.var("t")
STRICT = "(exists (x y) (and (< (+ (* a y) (* 3 x x) (* 4 x)) 0) (> x y) (> y a)))"
QUAD = "(exists (x y) (and (<= (+ (* a y) (* 3 (^ x 2)) (* 4 x)) a) (>= x a) (>= a y)))"


def equivalent_on(f, g, var, values):
    return all(evaluate_ground(f, {var: v}) == evaluate_ground(g, {var: v}) for v in values)


def grid(n=100, seed=1):
    rng = random.Random(seed)
    return [Fraction(rng.randint(-400, 400), rng.randint(1, 40)) for _ in range(n)]


def test_elimination_set_linear_weak():
    got = elimination_set("x", Atom(x - a, ">="))
    assert got == [GuardedTestPoint(TRUE, Root(RootExpression.of(a))),
                   GuardedTestPoint(TRUE, PLUS_INF)]


def test_elimination_set_negative_discriminant():
    assert elimination_set("x", Atom(x ** 2 + 1, ">=")) == [GuardedTestPoint(TRUE, PLUS_INF)]


def test_elimination_set_strict():
    psi = fix_parameters(parse(STRICT), {"a": -2}).matrix
    pts = [g.point for g in elimination_set("x", psi)]
    assert any(isinstance(p, RootMinusEps) for p in pts)
    assert isinstance(pts[-1], PlusInfinity)


def test_vs_root_examples():
    assert simplify(vs_root(Atom(x - 1, "="), "x", RootExpression.of(0, 1, 4, 2))) == TRUE
    assert simplify(vs_root(Atom(x, "="), "x", RootExpression.of(1, 1, 2, 1))) == FALSE
    free = Atom(a + 1, "<")
    assert vs_root(free, "x", RootExpression.of(a, 1, 3, 2)) == free


def cascade_display(tv):
    f = Poly.from_uni((-1, -1, 1, 1), "t")
    f1, f2, f3 = f.derivative("t"), f.derivative("t", 2), f.derivative("t", 3)
    return Or((Atom(f, "<"), And((Atom(f, "="), Or((Atom(f1, ">"), And((
        Atom(f1, "="), Or((Atom(f2, "<"), And((Atom(f2, "="), Atom(f3, ">")))))))))))))


def just_below(p_uni, t0, rel):
    """Truth of p rel 0 just below t0 (before any root below t0)."""
    sq = up_squarefree(p_uni)
    his = []
    for lo, hi in sturm_isolate(sq) if len(sq) > 1 else []:
        r = RealAlgebraicNumber(sq, lo, hi)
        if ran_compare_rational(r, t0) < 0:
            while r.hi >= t0:
                r = r.refine()
            his.append(r.hi)
    left = max(his) if his else t0 - 2
    pt = (left + t0) / 2
    return evaluate_ground(Atom(Poly.from_uni(p_uni, "x"), rel), {"x": pt})


def test_vs_eps_golden_cubic():
    f = x ** 3 + x ** 2 - x - 1
    got = vs_eps(Atom(f, "<"), "x", "t")
    want = cascade_display(None)
    pts = grid() + [Fraction(1), Fraction(-1), Fraction(-1, 3)]
    assert equivalent_on(got, want, "t", pts)
    for t0 in pts:
        assert evaluate_ground(got, {"t": t0}) == just_below((-1, -1, 1, 1), t0, "<")


def test_vs_eps_examples():
    assert equivalent_on(vs_eps(Atom(x, "<="), "x", "t"), Atom(t, "<="), "t", grid() + [Fraction(0)])
    assert simplify(vs_eps(Atom(x, "="), "x", "t")) == FALSE


def test_vs_inf_golden():
    got = simplify(vs_inf(Atom(a * x ** 2 + b * x + c, "<"), "x"))
    want = Or((Atom(a, "<"), And((Atom(a, "="), Atom(b, "<"))),
               And((Atom(a, "="), Atom(b, "="), Atom(c, "<")))))
    assert got == want
    assert simplify(vs_inf(Atom(x, ">"), "x")) == TRUE
    assert vs_inf(Atom(c, "<"), "x") == Atom(c, "<")


def test_degree_shift_examples():
    g, s, psi, guard = degree_shift("x", Atom(x ** 4 - 3 * x ** 2 + 2, "="))
    sh = Poly.var(s)
    assert g == 2 and psi == Atom(sh ** 2 - 3 * sh + 2, "=") and guard == Atom(sh, ">=")
    g, s, psi, guard = degree_shift("x", Atom(x ** 3 - 8, "="))
    assert g == 3 and psi == Atom(Poly.var(s) - 8, "=") and guard == TRUE
    assert degree_shift("x", Atom(x ** 2 + x, "<=")) is None


def test_vs_formula_examples():
    assert vs_formula(Atom(x, ">="), "x", GuardedTestPoint(TRUE, PLUS_INF)) == TRUE
    psi = parse(QUAD).matrix
    got = vs_formula(psi, "x", GuardedTestPoint(TRUE, Root(RootExpression.of(a))))
    want = mk_and([Atom(a * y + 3 * a ** 2 + 4 * a - a, "<="), Atom(a - y, ">=")])
    rng = random.Random(2)
    for _ in range(100):
        pt = {"a": Fraction(rng.randint(-30, 30), 7), "y": Fraction(rng.randint(-30, 30), 5)}
        assert evaluate_ground(got, pt) == evaluate_ground(want, pt)
    psi4 = fix_parameters(parse(STRICT), {"a": -2}).matrix
    phi = vs_formula(psi4, "y", GuardedTestPoint(TRUE, VarMinusEps("x")))
    want = mk_and([Atom(x + 2, ">"), Atom(3 * x ** 2 + 2 * x, "<")])
    assert equivalent_on(phi, want, "x", grid() + [Fraction(0), Fraction(-2, 3), Fraction(-2)])


def _random_root(rng, var="a"):
    v = Poly.var(var)
    a_ = rng.randint(-4, 4) + rng.randint(-3, 3) * v
    b_ = Poly.const(rng.choice([-2, -1, 1, 2, 3]))
    c_ = rng.randint(0, 6) + rng.randint(-2, 2) * v + rng.randint(0, 2) * v ** 2
    d_ = rng.choice([1, 2, 3, -1]) + rng.randint(-1, 1) * v
    return a_, b_, c_, d_


def _random_atom(rng):
    p = rng.randint(-3, 3) * x ** 2 + rng.randint(-3, 3) * x + rng.randint(-3, 3) \
        + rng.randint(-2, 2) * a * x + rng.randint(-2, 2) * a
    if p.degree("x") == 0:
        p = p + x
    return Atom(p, rng.choice(RELS))


def test_root_substitution_soundness():
    rng = random.Random(11)
    checked = 0
    while checked < 200:
        a_, b_, c_, d_ = _random_root(rng)
        atom = _random_atom(rng)
        s = Fraction(rng.randint(-12, 12), rng.randint(1, 3))
        cs, ds = c_.evaluate({"a": s}), d_.evaluate({"a": s})
        if cs <= 0 or ds == 0:
            continue
        e = RootExpression.of(a_, b_, c_, d_)
        lhs = evaluate_ground(vs_root(atom, "x", e), {"a": s})
        R = RealAlgebraicNumber.from_rational
        val = ran_div(ran_add(R(a_.evaluate({"a": s})),
                              ran_mul(R(b_.evaluate({"a": s})), ran_sqrt(R(cs)))), R(ds))
        rhs = formula_holds(atom, {"x": val, "a": s})
        assert lhs == rhs, (atom, e, s)
        checked += 1


def test_vs_eps_soundness():
    rng = random.Random(12)
    for _ in range(200):
        coeffs = [rng.randint(-4, 4) for _ in range(rng.randint(2, 4))]
        p = up_trim(coeffs)
        if len(p) < 2:
            continue
        rel = rng.choice(RELS)
        t0 = Fraction(rng.randint(-20, 20), rng.randint(1, 4))
        got = evaluate_ground(vs_eps(Atom(Poly.from_uni(p, "x"), rel), "x", "t"), {"t": t0})
        assert got == just_below(p, t0, rel)


def test_vs_inf_soundness():
    rng = random.Random(13)
    for _ in range(200):
        p = up_trim([rng.randint(-4, 4) for _ in range(rng.randint(2, 5))])
        if len(p) < 2:
            continue
        rel = rng.choice(RELS)
        atom = Atom(Poly.from_uni(p, "x"), rel)
        B = cauchy_root_bound(p)
        assert evaluate_ground(vs_inf(atom, "x"), {}) == evaluate_ground(atom, {"x": B + 1})


def test_substitution_commutation():
    rng = random.Random(14)
    u, w = Poly.var("u"), Poly.var("w")
    done = 0
    while done < 100:
        e1 = RootExpression.of(rng.randint(-3, 3), rng.choice([0, 1, -1]), rng.randint(0, 5),
                               rng.choice([1, 2, -3]))
        ai = rng.randint(-2, 2) + rng.randint(-2, 2) * w
        ci = rng.randint(0, 4) + rng.randint(-2, 2) * w
        di = rng.choice([1, 2]) + rng.randint(-1, 1) * w
        ei = RootExpression.of(ai, rng.choice([1, -1]), ci, di)
        gamma = mk_and([Atom(ci, ">="), Atom(di, "!=")])
        atoms_ = []
        for _ in range(rng.randint(1, 3)):
            p = (rng.randint(-2, 2) * u ** rng.randint(1, 2) + rng.randint(-2, 2) * x
                 + rng.randint(-2, 2) * u * x + rng.randint(-2, 2) * w + rng.randint(-2, 2))
            if p.is_zero():
                continue
            atoms_.append(Atom(p, rng.choice(RELS)))
        if not atoms_:
            continue
        f = mk_and([gamma, mk_and(atoms_)])
        lhs = substitute_point(substitute_point(f, "x", Root(ei)), "u", Root(e1))
        rhs = substitute_point(substitute_point(f, "u", Root(e1)), "x", Root(ei))
        for _ in range(5):
            pt = {"w": Fraction(rng.randint(-20, 20), rng.randint(1, 4))}
            assert evaluate_ground(lhs, pt) == evaluate_ground(rhs, pt)
        done += 1


def test_degree_shift_equivalence():
    rng = random.Random(15)
    from conftest import random_univariate_block
    hits = 0
    for _ in range(150):
        blk = random_univariate_block(rng, even=True)
        shifted = degree_shift("x", blk.matrix)
        if shifted is None:
            continue
        g, s, psi2, guard = shifted
        lhs = univariate_sample_decide(blk)
        rhs = univariate_sample_decide(ExistsBlock((s,), mk_and([guard, psi2])))
        assert lhs == rhs, blk
        hits += 1
    assert hits > 50

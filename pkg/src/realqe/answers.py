"""Standard answers: replacing eps / inf test points by real algebraic values.

Entries of a true pre-EQR row are processed from the outermost variable
inwards.  Root points are evaluated, +-inf points become integers beyond a
root bound, x - eps points become rationals just below the reference value,
and g-th root points take the real g-th root of their shadow's value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Mapping, Optional

from .formula import TRUE, ExistsBlock, QFFormula, atoms, fix_parameters
from .qe import Entry, PreEQR, PreEQRRow, iter_rows, point_expression
from .realalg import (
    AnswerExpression, Frac, RealAlgebraicNumber, eval_poly_at_rans,
    formula_holds, ran_add, ran_div, ran_mul, ran_nthroot, ran_sqrt,
    rational_recognition,
)
from .arith import Poly
from .vs import (
    GuardedTestPoint, MinusInfinity, NthRoot, PlusInfinity, Root, RootExpression,
    RootMinusEps, RootPlusEps, VarMinusEps, vs_formula,
)


class PreconditionParametric(ValueError):
    """Standard answers need every parameter fixed."""

    def __init__(self, params):
        self.parameters = tuple(params)
        super().__init__("standard answers need fixed parameters; unfixed: "
                         + ", ".join(self.parameters))


class MalformedPoint(TypeError):
    pass


class AllRowsFalse(Exception):
    pass


class InvariantViolation(RuntimeError):
    """A step the theory guarantees to succeed did not."""


@dataclass(frozen=True)
class AnswerConfig:
    scan_cap: int = 64       # integers tried before falling back to the bound
    refine_cap: int = 2000   # bisection steps allowed in the eps case


@dataclass(frozen=True)
class StandardAnswer:
    expr: AnswerExpression
    value: RealAlgebraicNumber
    rational: Optional[Fraction]

    def exact(self) -> str:
        if self.rational is not None:
            return str(self.rational)
        return str(self.value)


@dataclass
class StandardRow:
    condition: QFFormula
    answers: dict[str, StandardAnswer]
    # corrected scheme: (variable, guard, point) with every point standard
    corrected: list[tuple[str, QFFormula, object]] = field(default_factory=list)


def pick_row(pre: PreEQR) -> int:
    for i, row in enumerate(pre.rows):
        if row.condition == TRUE:
            return i
    raise AllRowsFalse("no row condition is true; the formula is false")


def _value_of_root(e: RootExpression, alpha) -> RealAlgebraicNumber:
    a = eval_poly_at_rans(e.a, alpha)
    d = eval_poly_at_rans(e.d, alpha)
    if d.sign() == 0:
        raise InvariantViolation(f"denominator of {e} vanishes")
    if e.b.is_zero():
        return ran_div(a, d)
    c = eval_poly_at_rans(e.c, alpha)
    if c.sign() < 0:
        raise InvariantViolation(f"radicand of {e} is negative")
    b = eval_poly_at_rans(e.b, alpha)
    return ran_div(ran_add(a, ran_mul(b, ran_sqrt(c))), d)


def _abs_bounds(x: RealAlgebraicNumber) -> tuple[Fraction, Fraction]:
    """(lower, upper) bounds on |x| for x != 0."""
    q = x.rational_value()
    if q is not None:
        return abs(q), abs(q)
    while x.lo < 0 < x.hi or x.lo == 0 or x.hi == 0:
        x = x.refine()
    lo, hi = sorted((abs(x.lo), abs(x.hi)))
    return lo, hi


def root_bound_at(xi: QFFormula, v: str, alpha) -> Fraction:
    """A bound B with every root of every atom of xi (in v, at alpha) in ]-B, B[."""
    B = Fraction(1)
    for atom in atoms(xi):
        if v not in atom.lhs.variables():
            continue
        coeffs = [eval_poly_at_rans(c, alpha) for c in atom.lhs.coeff_list(v)]
        while coeffs and coeffs[-1].sign() == 0:
            coeffs.pop()
        if len(coeffs) <= 1:
            continue
        lead_lo, _ = _abs_bounds(coeffs[-1])
        top = max((_abs_bounds(c)[1] if c.sign() else Fraction(0)) for c in coeffs[:-1])
        B = max(B, 1 + top / lead_lo)
    return B


def _holds(xi, v, value, alpha) -> bool:
    pt = dict(alpha)
    pt[v] = value
    return formula_holds(xi, pt)


def _infinity_value(xi, v, alpha, sign: int, cfg: AnswerConfig) -> Fraction:
    B = ceil(root_bound_at(xi, v, alpha))
    for k in range(1, min(B, cfg.scan_cap) + 1):
        if _holds(xi, v, Fraction(sign * k), alpha):
            return Fraction(sign * k)
    if _holds(xi, v, Fraction(sign * B), alpha):
        return Fraction(sign * B)
    raise InvariantViolation(f"no value beyond the root bound satisfies {v}'s formula")


def _ceil_ran(x: RealAlgebraicNumber) -> int:
    q = x.rational_value()
    if q is not None:
        return ceil(q)
    while floor(x.lo) != floor(x.hi):
        x = x.refine()
    return floor(x.lo) + 1


def _eps_value(xi, v, ref: RealAlgebraicNumber, alpha, sign: int,
               cfg: AnswerConfig) -> Fraction:
    """A rational just below (sign=-1) or above (sign=+1) ref satisfying xi."""
    if sign < 0:
        cand = Fraction(_ceil_ran(ref) - 1)
    else:
        cand = Fraction(-_ceil_ran(-ref) + 1)
    if _holds(xi, v, cand, alpha):
        return cand
    x = ref
    for _ in range(cfg.refine_cap):
        cand = x.lo if sign < 0 else x.hi
        if _holds(xi, v, cand, alpha):
            return cand
        x = x.refine()
    raise InvariantViolation(f"no rational near {ref} satisfies {v}'s formula")


def _tidy(x: RealAlgebraicNumber) -> RealAlgebraicNumber:
    # sign-definite interval of width at most 1/2, for readable output
    while x.lo < 0 < x.hi or x.hi - x.lo > Fraction(1, 2):
        x = x.refine()
    return x


def standard_row(row: PreEQRRow, matrix: QFFormula, quantified,
                 cfg: AnswerConfig = AnswerConfig()) -> StandardRow:
    if row.condition != TRUE:
        raise ValueError("standard answers need a row whose condition is true")
    n = len(row.entries)
    alpha: dict[str, RealAlgebraicNumber] = {}
    exprs: dict[str, AnswerExpression] = {}
    corrected: list[tuple[str, QFFormula, object]] = []
    counters = {"eps": 0, "inf": 0}
    for i in range(n - 1, -1, -1):
        entry = row.entries[i]
        v, point = entry.var, entry.point
        xi = row.trace[i]
        if isinstance(point, Root):
            if not formula_holds(entry.guard, alpha):
                raise InvariantViolation(f"guard of {v} fails at the computed values")
            val = _value_of_root(point.expr, alpha)
            expr = point_expression(point, counters)
            corrected.append((v, entry.guard, point))
        elif isinstance(point, (PlusInfinity, MinusInfinity)):
            s = 1 if isinstance(point, PlusInfinity) else -1
            q = _infinity_value(xi, v, alpha, s, cfg)
            val = RealAlgebraicNumber.from_rational(q)
            expr = Frac.of(Poly.const(q))
            corrected.append((v, TRUE, Root(RootExpression.of(q))))
        elif isinstance(point, (VarMinusEps, RootMinusEps, RootPlusEps)):
            if isinstance(point, VarMinusEps):
                if point.var not in alpha:
                    raise MalformedPoint(f"{v} refers to {point.var}, which has no value")
                ref = alpha[point.var]
            else:
                ref = _value_of_root(point.expr, alpha)
            s = 1 if isinstance(point, RootPlusEps) else -1
            q = _eps_value(xi, v, ref, alpha, s, cfg)
            val = RealAlgebraicNumber.from_rational(q)
            expr = Frac.of(Poly.const(q))
            corrected.append((v, TRUE, Root(RootExpression.of(q))))
        elif isinstance(point, NthRoot):
            if point.shadow not in alpha:
                raise MalformedPoint(f"{v} refers to {point.shadow}, which has no value")
            if not formula_holds(entry.guard, alpha):
                raise InvariantViolation(f"guard of {v} fails at the computed values")
            val = ran_nthroot(alpha[point.shadow], point.g)
            expr = point_expression(point, counters)
            corrected.append((v, entry.guard, point))
        else:
            raise MalformedPoint(f"unsupported test point for {v}: {point!r}")
        for w in list(expr.leaves()):
            if w in exprs:
                expr = expr.subs(w, exprs[w])
        if not expr.is_standard():
            raise InvariantViolation(f"answer for {v} is not standard")
        r = rational_recognition(val)
        if r is not None:
            val = RealAlgebraicNumber.from_rational(r)
            if not isinstance(expr, Frac) or not expr.num.is_constant():
                expr = Frac.of(Poly.const(r))
        else:
            val = _tidy(val)
        alpha[v] = val
        exprs[v] = expr
    check = {v: alpha[v] for v in quantified if v in alpha}
    if not formula_holds(matrix, check):
        raise InvariantViolation("computed answers do not satisfy the matrix")
    answers = {}
    for entry in row.entries:
        v = entry.var
        if v.startswith("$"):
            continue
        answers[v] = StandardAnswer(exprs[v], alpha[v], alpha[v].rational_value())
    corrected.reverse()
    return StandardRow(row.condition, answers, corrected)


def standard_answers(pre: PreEQR, row: int, cfg: AnswerConfig = AnswerConfig()) -> StandardRow:
    if pre.parameters:
        raise PreconditionParametric(pre.parameters)
    return standard_row(pre.rows[row], pre.matrix, pre.quantified, cfg)


def eps_nudge_row(row: PreEQRRow, k: int) -> Optional[PreEQRRow]:
    """Try replacing the Root point of entry k by e - eps, then e + eps."""
    entry = row.entries[k]
    if not isinstance(entry.point, Root):
        return None
    for cls in (RootMinusEps, RootPlusEps):
        new_entry = Entry(entry.var, entry.guard, cls(entry.point.expr))
        entries = list(row.entries)
        entries[k] = new_entry
        trace = list(row.trace[:k + 1])
        phi = trace[-1]
        for j in range(k, len(entries)):
            e = entries[j]
            phi = vs_formula(phi, e.var, GuardedTestPoint(e.guard, e.point))
            trace.append(phi)
        if phi == TRUE:
            return PreEQRRow(phi, tuple(entries), tuple(trace))
    return None


def eps_nudge(pre: PreEQR, row: int, k: int) -> Optional[PreEQRRow]:
    return eps_nudge_row(pre.rows[row], k)


def nudge_all(row: PreEQRRow) -> PreEQRRow:
    """Nudge every Root entry that admits it, innermost first."""
    for k, entry in enumerate(row.entries):
        if isinstance(entry.point, Root):
            new = eps_nudge_row(row, k)
            if new is not None:
                row = new
    return row


def solve(block: ExistsBlock, assignment: Mapping[str, Fraction] | None = None,
          all_rows: bool = False, nudge: bool = False,
          cfg: AnswerConfig = AnswerConfig()) -> list[StandardRow]:
    """Fix parameters, eliminate, and return standard answers for true rows."""
    fixed = fix_parameters(block, assignment or {})
    if fixed.parameters:
        raise PreconditionParametric(fixed.parameters)
    out = []
    for row in iter_rows(fixed):
        if row.condition != TRUE:
            continue
        if nudge:
            row = nudge_all(row)
        out.append(standard_row(row, fixed.matrix, fixed.quantified, cfg))
        if not all_rows:
            break
    if not out:
        raise AllRowsFalse("no row condition is true; the formula is false")
    return out

"""Elimination driver: pre-EQR construction, back-substitution, decisions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .arith import DegreeTooHigh, Poly
from .formula import (
    FALSE, TRUE, ExistsBlock, QFFormula, atoms, mk_or, simplify, variables,
)
from .realalg import (
    AnswerExpression, Frac, Radical, expr_from_root, univariate_satisfiable,
)
from .vs import (
    GuardedTestPoint, MinusInfinity, NthRoot, PlusInfinity, Root, RootExpression,
    RootMinusEps, RootPlusEps, VarMinusEps, degree_shift, elimination_set,
    vs_formula,
)

__all__ = [
    "Entry", "PreEQRRow", "PreEQR", "EQR", "EQRRow", "eliminate", "iter_rows",
    "back_substitute", "decide", "simplify", "qe",
]

ZERO_ROOT = Root(RootExpression.of(0))


@dataclass(frozen=True)
class Entry:
    var: str
    guard: QFFormula
    point: object

    def __str__(self):
        return f"{self.var} = {self.point}  [{self.guard}]"


@dataclass(frozen=True)
class PreEQRRow:
    condition: QFFormula
    entries: tuple[Entry, ...]
    trace: tuple[QFFormula, ...]

    def variables(self) -> list[str]:
        return [e.var for e in self.entries]


@dataclass
class PreEQR:
    rows: list[PreEQRRow]
    quantified: tuple[str, ...]
    matrix: QFFormula
    parameters: tuple[str, ...] = ()


@dataclass
class EQRRow:
    condition: QFFormula
    answers: dict[str, AnswerExpression]


@dataclass
class EQR:
    rows: list[EQRRow]
    quantified: tuple[str, ...]
    parameters: tuple[str, ...] = field(default=())


def _fresh(base: str, taken: set[str]) -> str:
    name, k = base, 2
    while name in taken:
        name = f"{base}{k}"
        k += 1
    return name


def _max_degree(phi: QFFormula, v: str) -> int:
    return max((a.lhs.degree(v) for a in atoms(phi)), default=0)


def iter_rows(block: ExistsBlock) -> Iterator[PreEQRRow]:
    """Depth-first walk of the Cartesian product of elimination sets.

    Rows come out in elimination-set order; branches whose intermediate
    formula simplifies to false are cut.
    """
    psi = simplify(block.matrix)
    taken = set(block.quantified) | set(block.parameters)

    def walk(phi, pending, entries, trace, used):
        if phi == FALSE:
            return
        if not pending:
            free = variables(phi)
            if len(free) == 1 and not univariate_satisfiable(phi, next(iter(free))):
                return
            yield PreEQRRow(phi, tuple(entries), tuple(trace))
            return
        v, forced = pending[0]
        rest = pending[1:]
        if forced is not None:
            choices = [(forced, rest)]
        elif v not in variables(phi):
            choices = [(GuardedTestPoint(TRUE, ZERO_ROOT), rest)]
        elif _max_degree(phi, v) > 2:
            shifted = degree_shift(v, phi, used)
            if shifted is None:
                raise DegreeTooHigh(v, _max_degree(phi, v))
            g, shadow, _, guard = shifted
            used = used | {shadow}
            choices = [(GuardedTestPoint(guard, NthRoot(g, shadow)), ((shadow, None),) + rest)]
        else:
            choices = [(gtp, rest) for gtp in elimination_set(v, phi)]
        for gtp, nxt in choices:
            point = gtp.point
            now_used = used
            if isinstance(point, RootMinusEps):
                var = point.expr.as_variable()
                if var is not None:
                    gtp = GuardedTestPoint(gtp.guard, VarMinusEps(var))
                else:
                    # e - eps becomes h - eps with h := e eliminated next
                    h = _fresh("$h", used)
                    now_used = used | {h}
                    nxt = ((h, GuardedTestPoint(gtp.guard, Root(point.expr))),) + nxt
                    gtp = GuardedTestPoint(TRUE, VarMinusEps(h))
            phi2 = vs_formula(phi, v, gtp)
            yield from walk(phi2, nxt, entries + [Entry(v, gtp.guard, gtp.point)],
                            trace + [phi2], now_used)

    pending = tuple((v, None) for v in block.quantified)
    yield from walk(psi, pending, [], [psi], taken)


def eliminate(block: ExistsBlock) -> PreEQR:
    return PreEQR(list(iter_rows(block)), block.quantified, block.matrix, block.parameters)


def qe(block: ExistsBlock) -> QFFormula:
    """Quantifier-free equivalent: the disjunction of all row conditions."""
    return simplify(mk_or([r.condition for r in iter_rows(block)]))


def decide(block: ExistsBlock) -> bool:
    if block.parameters:
        raise ValueError(f"free parameters {', '.join(block.parameters)}; fix them first")
    for row in iter_rows(block):
        if row.condition == TRUE:
            return True
    return False


def point_expression(point, counters: dict[str, int]) -> AnswerExpression:
    """Answer expression of one test point; nonstandard symbols get new indices."""
    if isinstance(point, Root):
        e = point.expr
        return expr_from_root(e.a, e.b, e.c, e.d)
    if isinstance(point, (RootMinusEps, RootPlusEps, VarMinusEps)):
        counters["eps"] += 1
        eps = Frac.of(Poly.var(f"eps_{counters['eps']}"))
        if isinstance(point, VarMinusEps):
            base = Frac.of(Poly.var(point.var))
        else:
            e = point.expr
            base = expr_from_root(e.a, e.b, e.c, e.d)
        if isinstance(point, RootPlusEps):
            return _add(base, eps)
        return _add(base, Frac.of(-eps.num))
    if isinstance(point, (PlusInfinity, MinusInfinity)):
        counters["inf"] += 1
        inf = Poly.var(f"inf_{counters['inf']}")
        return Frac.of(inf if isinstance(point, PlusInfinity) else -inf)
    if isinstance(point, NthRoot):
        return Radical(point.g, Frac.of(Poly.var(point.shadow)))
    raise TypeError(f"not a test point: {point!r}")


def _add(a, b):
    from .realalg import Add
    return Add(a, b)


def row_answers(row: PreEQRRow, hide_internal: bool = True) -> dict[str, AnswerExpression]:
    counters = {"eps": 0, "inf": 0}
    done: dict[str, AnswerExpression] = {}
    for entry in reversed(row.entries):
        expr = point_expression(entry.point, counters)
        for w in list(expr.leaves()):
            if w in done:
                expr = expr.subs(w, done[w])
        done[entry.var] = expr
    out = {}
    for entry in row.entries:
        if hide_internal and entry.var.startswith("$"):
            continue
        out[entry.var] = done[entry.var]
    return out


def back_substitute(pre: PreEQR) -> EQR:
    rows = [EQRRow(r.condition, row_answers(r)) for r in pre.rows]
    return EQR(rows, pre.quantified, pre.parameters)

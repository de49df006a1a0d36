"""Virtual substitution of root expressions, x - eps, +-inf and g-th roots."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Optional, Union

from .arith import (
    DegreeTooHigh, Poly, discriminant, monomial_content, poly_sqrt, quad_view,
)
from .formula import (
    FALSE, STRICT, TRUE, Atom, QFFormula, atoms, map_atoms, mk_and, mk_or,
    simplify, variables,
)


@dataclass(frozen=True)
class RootExpression:
    """(a + b*sqrt(c)) / d."""
    a: Poly
    b: Poly
    c: Poly
    d: Poly

    @classmethod
    def of(cls, a, b=0, c=0, d=1) -> RootExpression:
        return normalize_root(*(Poly.coerce(x) for x in (a, b, c, d)))

    @classmethod
    def var(cls, name: str) -> RootExpression:
        return cls.of(Poly.var(name))

    def variables(self) -> frozenset[str]:
        return self.a.variables() | self.b.variables() | self.c.variables() | self.d.variables()

    def is_rational_form(self) -> bool:
        return self.b.is_zero()

    def as_variable(self) -> Optional[str]:
        """The variable name if this is a bare variable."""
        if self.b.is_zero() and self.d == Poly.const(1) and len(self.a.terms) == 1:
            (mono, coeff), = self.a.terms.items()
            if coeff == 1 and len(mono) == 1 and mono[0][1] == 1:
                return mono[0][0]
        return None

    def guard(self) -> QFFormula:
        """Where the expression is meaningful."""
        parts = []
        if not self.d.is_constant():
            parts.append(Atom(self.d, "!="))
        if not self.b.is_zero() and not self.c.is_constant():
            parts.append(Atom(self.c, ">="))
        return simplify(mk_and(parts))

    def __str__(self) -> str:
        from .realalg import expr_from_root
        return str(expr_from_root(self.a, self.b, self.c, self.d))


def _square_split(n: int) -> tuple[int, int]:
    """n = s^2 * r with r squarefree-ish (small factors removed); returns (s, r)."""
    s, r = 1, n
    k = 2
    while k * k <= r and k < 1000:
        while r % (k * k) == 0:
            r //= k * k
            s *= k
        k += 1
    t = isqrt(r)
    if t * t == r:
        return s * t, 1
    return s, r


def _common_monomial(polys) -> tuple:
    common = None
    for p in polys:
        if p.is_zero():
            continue
        m = dict(monomial_content(p))
        common = m if common is None else {v: min(e, m[v]) for v, e in common.items() if v in m}
    return tuple(sorted((v, e) for v, e in (common or {}).items() if e))


def normalize_root(a: Poly, b: Poly, c: Poly, d: Poly) -> RootExpression:
    if d.is_zero():
        raise ZeroDivisionError("root expression with zero denominator")
    if b.is_zero() or c.is_zero():
        b, c = Poly(), Poly()
    elif c.is_constant():
        cv = Fraction(c.constant_value())
        if cv > 0:
            # sqrt(p/q) = sqrt(p*q)/q
            b = b * Fraction(1, cv.denominator)
            s, r = _square_split(cv.numerator * cv.denominator)
            b = b * s
            if r == 1:
                a, b, c = a + b, Poly(), Poly()
            else:
                c = Poly.const(r)
    # common content of a, b, d
    parts = [p for p in (a, b, d) if not p.is_zero()]
    g = Fraction(0)
    if parts:
        cs = [p.content() for p in parts]
        g = Fraction(gcd(*(x.numerator for x in cs)), lcm(*(x.denominator for x in cs)))
    if g and g != 1:
        a, b, d = a * (1 / g), b * (1 / g), d * (1 / g)
    if not d.is_constant():
        # cancel a common monomial; d != 0 is guarded
        m = _common_monomial([a, b, d])
        if m:
            mp = Poly({m: 1})
            a, b, d = a.exact_div(mp), b.exact_div(mp), d.exact_div(mp)
    if b.is_zero() and not d.is_constant():
        try:
            a, d = a.exact_div(d), Poly.const(1)
        except ArithmeticError:
            pass
    if d.is_constant() and d.constant_value() < 0:
        a, b, d = -a, -b, -d
    elif not d.is_constant() and d.lc_grlex() < 0:
        a, b, d = -a, -b, -d
    return RootExpression(a, b, c, d)


# ---------------------------------------------------------------------------
# test points


@dataclass(frozen=True)
class Root:
    expr: RootExpression

    def __str__(self):
        return str(self.expr)


def _paren(e) -> str:
    s = str(e)
    return f"({s})" if " " in s else s


@dataclass(frozen=True)
class RootMinusEps:
    expr: RootExpression

    def __str__(self):
        return f"{_paren(self.expr)} - eps"


@dataclass(frozen=True)
class RootPlusEps:
    expr: RootExpression

    def __str__(self):
        return f"{_paren(self.expr)} + eps"


@dataclass(frozen=True)
class VarMinusEps:
    var: str

    def __str__(self):
        return f"{self.var} - eps"


@dataclass(frozen=True)
class PlusInfinity:
    def __str__(self):
        return "inf"


@dataclass(frozen=True)
class MinusInfinity:
    def __str__(self):
        return "-inf"


@dataclass(frozen=True)
class NthRoot:
    g: int
    shadow: str

    def __post_init__(self):
        if self.g < 1:
            raise ValueError("root index must be >= 1")

    def __str__(self):
        return f"root{self.g}({self.shadow})"


TestPoint = Union[Root, RootMinusEps, RootPlusEps, VarMinusEps, PlusInfinity,
                  MinusInfinity, NthRoot]
PLUS_INF = PlusInfinity()
MINUS_INF = MinusInfinity()


@dataclass(frozen=True)
class GuardedTestPoint:
    guard: QFFormula
    point: TestPoint

    def __str__(self):
        return f"({self.guard}, {self.point})"


# ---------------------------------------------------------------------------
# elimination sets


def _atoms_with(psi: QFFormula, v: str) -> list[Atom]:
    seen = []
    for a in atoms(psi):
        if v in a.lhs.variables() and a not in seen:
            seen.append(a)
    return seen


def _square_factor(p: Poly) -> tuple[Poly, Poly]:
    """p = s^2 * r with s the even part of the monomial content."""
    m = monomial_content(p)
    half = tuple((v, e // 2) for v, e in m if e >= 2)
    if not half:
        return Poly.const(1), p
    s = Poly({half: 1})
    return s, p.exact_div(s * s)


def elimination_set(v: str, psi: QFFormula) -> list[GuardedTestPoint]:
    """Guarded test points for eliminating v from psi (upper-bound variant).

    Strict atoms only contribute roots that can be the supremum of a
    solution interval: for f < 0 that is (-f1 + sqrt(D)) / (2 f2) whatever
    the sign of f2, and for a linear f the root when f1 > 0.
    """
    out: list[GuardedTestPoint] = []

    def add(guard, point):
        guard = simplify(guard)
        if guard == FALSE:
            return
        gtp = GuardedTestPoint(guard, point)
        if gtp not in out:
            out.append(gtp)

    for atom in _atoms_with(psi, v):
        deg = atom.lhs.degree(v)
        if deg > 2:
            raise DegreeTooHigh(v, deg)
        f2, f1, f0 = quad_view(atom.lhs, v)
        rel = atom.rel
        wrap = RootMinusEps if rel in STRICT else Root
        signs = {"<": (1,), ">": (-1,)}.get(rel, (-1, 1))
        if not f2.is_zero():
            disc = discriminant(f2, f1, f0)
            s = None if disc.is_constant() else poly_sqrt(disc)
            if s is not None:
                # sqrt(D) = +-s with unknown sign: keep both roots
                for r in (-f1 - s, -f1 + s):
                    add(Atom(f2, "!="), wrap(RootExpression.of(r, 0, 0, f2 * 2)))
            else:
                g = mk_and([Atom(f2, "!="), Atom(disc, ">=")])
                # |s| sqrt(r) = sqrt(D); the sign of s is irrelevant for a root pair
                sq, r = _square_factor(disc) if len(signs) == 2 else (Poly.const(1), disc)
                for sgn in signs:
                    add(g, wrap(RootExpression.of(-f1, sq * sgn, r, f2 * 2)))
        if not f1.is_zero():
            lin = {"<": ">", ">": "<"}.get(rel, "!=")
            g = mk_and([Atom(f2, "="), Atom(f1, lin)])
            add(g, wrap(RootExpression.of(-f0, 0, 0, f1)))
    add(TRUE, PLUS_INF)
    return out


# ---------------------------------------------------------------------------
# substitution operators


def _root_rules(A: Poly, B: Poly, c: Poly, rel: str) -> QFFormula:
    """A + B*sqrt(c) rel 0, assuming c >= 0."""
    if B.is_zero():
        return Atom(A, rel)
    if rel in (">", ">="):
        return _root_rules(-A, -B, c, "<" if rel == ">" else "<=")
    D = A * A - B * B * c
    if rel == "=":
        return mk_and([Atom(A * B, "<="), Atom(D, "=")])
    if rel == "!=":
        return mk_or([Atom(A * B, ">"), Atom(D, "!=")])
    if rel == "<=":
        return mk_or([mk_and([Atom(A, "<="), Atom(D, ">=")]),
                      mk_and([Atom(B, "<="), Atom(D, "<=")])])
    # rel == "<"
    return mk_or([mk_and([Atom(A, "<"), Atom(D, ">")]),
                  mk_and([Atom(B, "<="), mk_or([Atom(A, "<"), Atom(D, "<")])])])


def vs_root(atom: Atom, v: str, e: RootExpression) -> QFFormula:
    """atom[v // e], valid wherever c >= 0 and d != 0."""
    f = atom.lhs
    n = f.degree(v)
    if n <= 0:
        return atom
    a, b, c, d = e.a, e.b, e.c, e.d
    A, B = Poly(), Poly()
    Ak, Bk = Poly.const(1), Poly()
    dpow = [Poly.const(1)]
    for _ in range(n):
        dpow.append(dpow[-1] * d)
    coeffs = f.coeffs_in(v)
    for k in range(n + 1):
        if k in coeffs:
            w = coeffs[k] * dpow[n - k]
            A = A + w * Ak
            B = B + w * Bk
        Ak, Bk = Ak * a + Bk * b * c, Ak * b + Bk * a
    if n % 2 == 1 and not (d.is_constant() and d.constant_value() > 0):
        # multiply by d: f(e) * d^(n+1) has the sign of f(e)
        A, B = A * d, B * d
    return _root_rules(A, B, c, atom.rel)


def _subst_point(atom: Atom, v: str, t) -> QFFormula:
    if isinstance(t, str):
        return Atom(atom.lhs.subs({v: Poly.var(t)}), atom.rel)
    if isinstance(t, Poly):
        return Atom(atom.lhs.subs({v: t}), atom.rel)
    return vs_root(atom, v, t)


def _eps_lt(derivs: list[Poly], s: int, k: int) -> QFFormula:
    """f(t + s*eps) < 0 in terms of the derivatives from order k on."""
    f = derivs[k] if s == 1 or k % 2 == 0 else -derivs[k]
    if k == len(derivs) - 1:
        return Atom(f, "<")
    return mk_or([Atom(f, "<"),
                  mk_and([Atom(derivs[k], "="), _eps_lt(derivs, s, k + 1)])])


def vs_eps(atom: Atom, v: str, t, sign: int = -1) -> QFFormula:
    """atom[v // t - eps] (sign=-1) or atom[v // t + eps] (sign=+1).

    `t` is a variable name, a polynomial or a RootExpression.
    """
    f = atom.lhs
    d = f.degree(v)
    if d <= 0:
        return atom
    rel = atom.rel
    if rel in (">", ">="):
        f = -f
        rel = "<" if rel == ">" else "<="
    derivs = [f.derivative(v, k) for k in range(d + 1)]
    eq = mk_and([Atom(p, "=") for p in derivs])
    if rel == "<":
        raw = _eps_lt(derivs, sign, 0)
    elif rel == "<=":
        raw = mk_or([_eps_lt(derivs, sign, 0), eq])
    elif rel == "=":
        raw = eq
    else:
        raw = mk_or([Atom(p, "!=") for p in derivs])
    return map_atoms(raw, lambda a: _subst_point(a, v, t))


def vs_inf(atom: Atom, v: str, sign: int = 1) -> QFFormula:
    """atom[v // +inf] (sign=+1) or atom[v // -inf] (sign=-1)."""
    f = atom.lhs
    d = f.degree(v)
    if d <= 0:
        return atom
    rel = atom.rel
    if rel in (">", ">="):
        f = -f
        rel = "<" if rel == ">" else "<="
    cs = f.coeffs_in(v)
    a = [cs.get(k, Poly()) * (sign ** k) for k in range(d + 1)]
    eq = mk_and([Atom(p, "=") for p in reversed(a)])
    if rel in ("<", "<="):
        disj = []
        for k in range(d, -1, -1):
            disj.append(mk_and([Atom(a[j], "=") for j in range(d, k, -1)] + [Atom(a[k], "<")]))
        lt = mk_or(disj)
        return lt if rel == "<" else mk_or([lt, eq])
    if rel == "=":
        return eq
    return mk_or([Atom(p, "!=") for p in reversed(a)])


# ---------------------------------------------------------------------------
# degree shift


def _flexible_power(p: Poly, v: str) -> int:
    """n if every term of p has v-exponent n, else 0."""
    exps = p.exponents(v)
    return next(iter(exps)) if len(exps) == 1 else 0


def _shift_exponent(atom: Atom, v: str, g: int) -> Optional[dict]:
    """Exponent map j -> j' for one atom under the shift by g, or None."""
    f = atom.lhs
    n = _flexible_power(f, v)
    if n > 0:
        if atom.rel in ("=", "!="):
            return {n: 1}
        if n % 2 == 0:
            return {n: 1 if g % 2 == 0 else 2}
        if g % 2 == 1:
            return {n: 1}
        return None
    out = {}
    for j in f.exponents(v):
        if j % g:
            return None
        out[j] = j // g
    return out


def _shift_atom(atom: Atom, v: str, g: int, shadow: str) -> QFFormula:
    if v not in atom.lhs.variables():
        return atom
    emap = _shift_exponent(atom, v, g)
    if emap is None:
        raise ValueError(f"atom {atom} does not admit a shift by {g}")
    s = Poly.var(shadow)
    out = Poly()
    for k, c in atom.lhs.coeffs_in(v).items():
        out = out + c * s ** emap.get(k, 0)
    return Atom(out, atom.rel)


def shadow_name(v: str, taken) -> str:
    name = "$" + v
    k = 2
    while name in taken:
        name = f"${v}{k}"
        k += 1
    return name


def shift_gcd(v: str, psi: QFFormula) -> int:
    rigid: list[int] = []
    flex: list[tuple[int, str]] = []
    for a in _atoms_with(psi, v):
        n = _flexible_power(a.lhs, v)
        if n > 0:
            flex.append((n, a.rel))
        else:
            rigid.extend(j for j in a.lhs.exponents(v) if j > 0)
    g = 0
    for j in rigid:
        g = gcd(g, j)
    if not rigid:
        for n, _ in flex:
            g = gcd(g, n)
    changed = True
    while changed and g > 1:
        changed = False
        for n, rel in flex:
            if rel not in ("=", "!=") and n % 2 == 1 and g % 2 == 0:
                g = gcd(g, n)
                changed = True
    return g


def degree_shift(v: str, psi: QFFormula, taken=()):
    """(g, shadow, psi', guard) replacing v^g by a shadow variable, or None."""
    if v not in variables(psi):
        return None
    g = shift_gcd(v, psi)
    if g <= 1:
        return None
    shadow = shadow_name(v, set(taken) | variables(psi))
    psi2 = map_atoms(psi, lambda a: _shift_atom(a, v, g, shadow))
    guard = Atom(Poly.var(shadow), ">=") if g % 2 == 0 else TRUE
    return g, shadow, psi2, guard


# ---------------------------------------------------------------------------


def substitute_point(psi: QFFormula, v: str, point: TestPoint) -> QFFormula:
    """psi[v // point] without the guard and without simplification."""
    if isinstance(point, Root):
        e = point.expr
        if e.is_rational_form() and e.d == Poly.const(1):
            return map_atoms(psi, lambda a: Atom(a.lhs.subs({v: e.a}), a.rel))
        return map_atoms(psi, lambda a: vs_root(a, v, e))
    if isinstance(point, (RootMinusEps, RootPlusEps)):
        s = -1 if isinstance(point, RootMinusEps) else 1
        e = point.expr
        t = e.a if e.is_rational_form() and e.d == Poly.const(1) else e
        return map_atoms(psi, lambda a: vs_eps(a, v, t, s))
    if isinstance(point, VarMinusEps):
        return map_atoms(psi, lambda a: vs_eps(a, v, point.var, -1))
    if isinstance(point, PlusInfinity):
        return map_atoms(psi, lambda a: vs_inf(a, v, 1))
    if isinstance(point, MinusInfinity):
        return map_atoms(psi, lambda a: vs_inf(a, v, -1))
    if isinstance(point, NthRoot):
        return map_atoms(psi, lambda a: _shift_atom(a, v, point.g, point.shadow))
    raise TypeError(f"not a test point: {point!r}")


def vs_formula(psi: QFFormula, v: str, gtp: GuardedTestPoint) -> QFFormula:
    """gamma and psi[v // e], simplified."""
    if gtp.guard == FALSE:
        return FALSE
    return simplify(mk_and([gtp.guard, substitute_point(psi, v, gtp.point)]))

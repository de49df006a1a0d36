"""Tarski formulas: AST, s-expression reader/printer, basic simplification."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator, Mapping, Union

from .arith import Number, Poly, ZERO, monomial_content

RELATIONS = ("=", "!=", "<", "<=", ">", ">=")
NEGATE = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}
# relation obtained when the left hand side is multiplied by -1
FLIP = {"=": "=", "!=": "!=", "<": ">", ">": "<", "<=": ">=", ">=": "<="}
STRICT = frozenset({"<", ">", "!="})


class ParseError(Exception):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line = line
        self.col = col


class UnsupportedQuantifier(ParseError):
    pass


def rel_holds(rel: str, sign: int) -> bool:
    """Truth of ``s rel 0`` for a value of sign `sign`."""
    if rel == "=":
        return sign == 0
    if rel == "!=":
        return sign != 0
    if rel == "<":
        return sign < 0
    if rel == "<=":
        return sign <= 0
    if rel == ">":
        return sign > 0
    return sign >= 0


@dataclass(frozen=True)
class TrueF:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class FalseF:
    def __str__(self) -> str:
        return "false"


TRUE = TrueF()
FALSE = FalseF()


@dataclass(frozen=True)
class Atom:
    lhs: Poly
    rel: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel}")

    def negate(self) -> Atom:
        return Atom(self.lhs, NEGATE[self.rel])

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


QFFormula = Union[TrueF, FalseF, Atom, And, Or]


@dataclass(frozen=True)
class ExistsBlock:
    """∃ block; `quantified` is innermost first (elimination order)."""
    quantified: tuple[str, ...]
    matrix: QFFormula
    parameters: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.parameters:
            params = sorted(variables(self.matrix) - set(self.quantified))
            object.__setattr__(self, "parameters", tuple(params))
        if set(self.quantified) & set(self.parameters):
            raise ValueError("quantified and free variables overlap")


def mk_and(args) -> QFFormula:
    args = tuple(args)
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return And(args)


def mk_or(args) -> QFFormula:
    args = tuple(args)
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return Or(args)


def negate(f: QFFormula) -> QFFormula:
    if isinstance(f, TrueF):
        return FALSE
    if isinstance(f, FalseF):
        return TRUE
    if isinstance(f, Atom):
        return f.negate()
    if isinstance(f, And):
        return Or(tuple(negate(a) for a in f.args))
    return And(tuple(negate(a) for a in f.args))


def atoms(f: QFFormula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from atoms(a)


def variables(f: QFFormula) -> set[str]:
    out: set[str] = set()
    for a in atoms(f):
        out |= a.lhs.variables()
    return out


def map_atoms(f: QFFormula, fn) -> QFFormula:
    """Replace every atom by ``fn(atom)`` (a formula); structure is kept."""
    if isinstance(f, Atom):
        return fn(f)
    if isinstance(f, And):
        return And(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(map_atoms(a, fn) for a in f.args))
    return f


def substitute_var(f: QFFormula, v: str, p: Poly) -> QFFormula:
    return map_atoms(f, lambda a: Atom(a.lhs.subs({v: p}), a.rel))


def evaluate_ground(f: QFFormula, point: Mapping[str, Number]) -> bool:
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Atom):
        v = f.lhs.evaluate(point)
        return rel_holds(f.rel, (v > 0) - (v < 0))
    if isinstance(f, And):
        return all(evaluate_ground(a, point) for a in f.args)
    return any(evaluate_ground(a, point) for a in f.args)


def _clear_denominators(p: Poly) -> Poly:
    den = lcm(*(Fraction(c).denominator for c in p.terms.values())) if p.terms else 1
    return p * den if den != 1 else p


def fix_parameters(f: ExistsBlock, assignment: Mapping[str, Number]) -> ExistsBlock:
    """Substitute rational values for free (or quantified) variables.

    Fixing a quantified variable removes it from the block; this is how a
    user-chosen variable gets a concrete value.
    """
    known = set(f.parameters) | set(f.quantified)
    for v in assignment:
        if v not in known:
            raise KeyError(f"unknown variable {v}")
    if not assignment:
        return f
    vals = {v: Poly.const(Fraction(c)) for v, c in assignment.items()}
    matrix = map_atoms(f.matrix,
                       lambda a: Atom(_clear_denominators(a.lhs.subs(vals)), a.rel))
    quant = tuple(v for v in f.quantified if v not in assignment)
    return ExistsBlock(quant, matrix)


# ---------------------------------------------------------------------------
# simplification


_SIGNS = {"<": {-1}, "<=": {-1, 0}, "=": {0}, "!=": {-1, 1}, ">": {1}, ">=": {0, 1}}
_REL_OF = {frozenset(v): k for k, v in _SIGNS.items()}


def _split_monomial_factor(p: Poly, rel: str):
    """Peel the common monomial factor off p.

    Returns (q, rel, extra) where ``p rel 0`` is equivalent to ``q rel 0``
    combined with the variable conditions in `extra` (a conjunction for
    strict relations, a disjunction for weak ones).  Odd powers stay as a
    single factor of the variable.
    """
    m = monomial_content(p)
    if not m or len(p.terms) == 1 and len(m) == 1 and m[0][1] == 1:
        return p, rel, []
    keep = tuple((v, 1) for v, e in m if e % 2 and rel not in ("=", "!="))
    gone = [v for v, e in m if not (e % 2 and rel not in ("=", "!="))]
    q = p.exact_div(Poly({m: 1}))
    if keep:
        q = q * Poly({keep: 1})
    return q, rel, gone


def _possible_signs(p: Poly) -> set[int]:
    """Signs p can take, from a cheap even-power/positivity argument."""
    if all(c > 0 for c in p.terms.values()) and all(e % 2 == 0 for m in p.terms for _, e in m):
        return {1} if () in p.terms else {0, 1}
    return {-1, 0, 1}


def normalize_atom(a: Atom) -> QFFormula:
    """Content-free lhs with positive leading coefficient; ground atoms decided."""
    p = a.lhs
    if p.is_constant():
        c = p.constant_value()
        return TRUE if rel_holds(a.rel, (c > 0) - (c < 0)) else FALSE
    q, rel, gone = _split_monomial_factor(p.primitive(), a.rel)
    if gone:
        # v^even * q: v = 0 makes the lhs zero, otherwise sign(q) decides
        var_zero = [Atom(Poly.var(v), "=") for v in gone]
        main = normalize_atom(Atom(q, rel))
        if rel in ("=", "<=", ">="):
            return simplify(mk_or(var_zero + [main]))
        return simplify(mk_and([negate(z) for z in var_zero] + [main]))
    if q.lc_grlex() < 0:
        q = -q
        rel = FLIP[rel]
    possible = _possible_signs(q)
    if len(possible) < 3:
        allowed = possible & _SIGNS[rel]
        if not allowed:
            return FALSE
        if allowed == possible:
            return TRUE
        if frozenset(allowed) in _REL_OF:
            rel = _REL_OF[frozenset(allowed)]
    if q == p and rel == a.rel:
        return a
    return Atom(q, rel)


def _linear_bound(a: Atom):
    """(var, value, rel) for an atom c*v + d rel 0 with c > 0."""
    p = a.lhs
    vs = p.variables()
    if len(vs) != 1 or p.total_degree() != 1:
        return None
    v = next(iter(vs))
    c = p.terms.get(((v, 1),), 0)
    d = p.terms.get((), 0)
    if c <= 0:
        return None
    return v, Fraction(-d) / c, a.rel


def _bounds_conflict(items) -> bool:
    """True if univariate linear atoms in a conjunction are inconsistent."""
    lo: dict[str, tuple[Fraction, bool]] = {}
    hi: dict[str, tuple[Fraction, bool]] = {}
    eqs: dict[str, set] = {}
    ne: dict[str, set] = {}
    for it in items:
        if not isinstance(it, Atom):
            continue
        b = _linear_bound(it)
        if b is None:
            continue
        v, r, rel = b
        if rel in (">", ">=", "="):
            cur = lo.get(v)
            strict = rel == ">"
            if cur is None or r > cur[0] or (r == cur[0] and strict):
                lo[v] = (r, strict)
        if rel in ("<", "<=", "="):
            cur = hi.get(v)
            strict = rel == "<"
            if cur is None or r < cur[0] or (r == cur[0] and strict):
                hi[v] = (r, strict)
        if rel == "!=":
            ne.setdefault(v, set()).add(r)
    for v in set(lo) & set(hi):
        (l, ls), (h, hs) = lo[v], hi[v]
        if l > h or (l == h and (ls or hs or l in ne.get(v, ()))):
            return True
    return False


def _merge_same_lhs(items: list, is_and: bool):
    """Combine atoms sharing a left hand side; returns a list or TRUE/FALSE."""
    groups: dict[Poly, set[int]] = {}
    order: list = []
    for it in items:
        if isinstance(it, Atom):
            sig = set(_SIGNS[it.rel])
            if it.lhs in groups:
                old = groups[it.lhs]
                groups[it.lhs] = old & sig if is_and else old | sig
                continue
            groups[it.lhs] = sig
            order.append(it.lhs)
        else:
            order.append(it)
    out = []
    for it in order:
        if not isinstance(it, Poly):
            out.append(it)
            continue
        sig = groups[it]
        if not sig:
            return FALSE
        if len(sig) == 3:
            return TRUE
        out.append(Atom(it, _REL_OF[frozenset(sig)]))
    return out


def _use_context(items: list, is_and: bool):
    """Let sibling atoms decide atoms one level down; None if nothing changed.

    Inside a conjunction the sibling atoms are true, inside a disjunction
    they are false.
    """
    facts = {it for it in items if isinstance(it, Atom)}
    if not facts or len(facts) == len(items):
        return None
    if is_and:
        known_true, known_false = facts, {a.negate() for a in facts}
    else:
        known_true, known_false = {a.negate() for a in facts}, facts
    changed = False
    out = []
    for it in items:
        if isinstance(it, (And, Or)):
            new = []
            for sub in it.args:
                if sub in known_true:
                    new.append(TRUE)
                    changed = True
                elif sub in known_false:
                    new.append(FALSE)
                    changed = True
                else:
                    new.append(sub)
            it = type(it)(tuple(new))
        out.append(it)
    return out if changed else None


def _implies(a, b) -> bool:
    if a == b:
        return True
    return (isinstance(a, Atom) and isinstance(b, Atom) and a.lhs == b.lhs
            and _SIGNS[a.rel] <= _SIGNS[b.rel])


def _absorb(items: list, is_and: bool) -> list:
    """Drop members implied by (in a conjunction) or implying (in a
    disjunction) a sibling, comparing one level down."""
    inner = Or if is_and else And
    parts = [set(it.args) if isinstance(it, inner) else {it} for it in items]
    keep = []
    for i, si in enumerate(parts):
        redundant = False
        for j, sj in enumerate(parts):
            if i == j or (sj == si and j > i):
                continue
            if is_and:
                # member j implies member i
                hit = all(any(_implies(x, y) for y in si) for x in sj)
            else:
                # member i implies member j
                hit = all(any(_implies(x, y) for x in si) for y in sj)
            if hit:
                redundant = True
                break
        if not redundant:
            keep.append(items[i])
    return keep


def simplify(f: QFFormula) -> QFFormula:
    """Basic simplifier: ground evaluation, flattening, dedup, complements."""
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Atom):
        return normalize_atom(f)
    is_and = isinstance(f, And)
    unit, zero = (TRUE, FALSE) if is_and else (FALSE, TRUE)
    cls = And if is_and else Or
    out: list = []
    seen: set = set()
    for arg in f.args:
        s = simplify(arg)
        if s == zero:
            return zero
        if s == unit:
            continue
        parts = s.args if isinstance(s, cls) else (s,)
        for p in parts:
            if p not in seen:
                seen.add(p)
                out.append(p)
    merged = _merge_same_lhs(out, is_and)
    if not isinstance(merged, list):
        return merged
    if is_and and _bounds_conflict(merged):
        return FALSE
    ctx = _use_context(merged, is_and)
    if ctx is not None:
        return simplify(cls(tuple(ctx)))
    merged = _absorb(merged, is_and)
    if not merged:
        return unit
    if len(merged) == 1:
        return merged[0]
    return cls(tuple(merged))


# ---------------------------------------------------------------------------
# s-expression reader

_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|([^\s();]+))")
_IDENT = re.compile(r"[A-Za-z_$][A-Za-z0-9_$]*\Z")
_INT = re.compile(r"[+-]?\d+\Z")
_DEC = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+/\d+)\Z")
_REL_OPS = {"=", "!=", "<", "<=", ">", ">="}


@dataclass
class _Tok:
    text: str
    line: int
    col: int


@dataclass
class _List:
    items: list
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    for lineno, line in enumerate(text.split("\n"), 1):
        pos = 0
        while pos < len(line):
            m = _TOKEN.match(line, pos)
            if not m or m.end() == pos:
                if line[pos:].strip() == "":
                    break
                raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            if m.group(1) is None:
                tok = m.group(2) or m.group(3) or m.group(4)
                if tok is not None:
                    toks.append(_Tok(tok, lineno, m.start(m.lastindex) + 1))
            pos = m.end()
    return toks


def _read(toks: list[_Tok]):
    stack: list[_List] = []
    result = None
    for t in toks:
        if t.text == "(":
            stack.append(_List([], t.line, t.col))
        elif t.text == ")":
            if not stack:
                raise ParseError("unbalanced ')'", t.line, t.col)
            lst = stack.pop()
            if stack:
                stack[-1].items.append(lst)
            elif result is None:
                result = lst
            else:
                raise ParseError("more than one formula", t.line, t.col)
        else:
            if stack:
                stack[-1].items.append(t)
            elif result is None:
                result = t
            else:
                raise ParseError("more than one formula", t.line, t.col)
    if stack:
        raise ParseError("unbalanced '('", stack[-1].line, stack[-1].col)
    if result is None:
        raise ParseError("empty input")
    return result


def _head(node) -> str | None:
    if isinstance(node, _List) and node.items and isinstance(node.items[0], _Tok):
        return node.items[0].text
    return None


def _term(node) -> Poly:
    if isinstance(node, _Tok):
        s = node.text
        if _INT.match(s):
            return Poly.const(int(s))
        if _DEC.match(s):
            try:
                return Poly.const(Fraction(s))
            except ZeroDivisionError:
                raise ParseError(f"zero denominator in {s!r}", node.line, node.col) from None
        if _IDENT.match(s) and s not in ("true", "false"):
            return Poly.var(s)
        raise ParseError(f"bad term {s!r}", node.line, node.col)
    op = _head(node)
    args = node.items[1:]
    if op is None:
        raise ParseError("expected operator", node.line, node.col)
    if op == "+":
        acc = ZERO
        for a in args:
            acc = acc + _term(a)
        return acc
    if op == "*":
        acc = Poly.const(1)
        for a in args:
            acc = acc * _term(a)
        return acc
    if op == "-":
        if not args:
            raise ParseError("'-' needs an argument", node.line, node.col)
        if len(args) == 1:
            return -_term(args[0])
        acc = _term(args[0])
        for a in args[1:]:
            acc = acc - _term(a)
        return acc
    if op == "/":
        if len(args) != 2:
            raise ParseError("'/' takes two arguments", node.line, node.col)
        num, den = _term(args[0]), _term(args[1])
        if not den.is_constant() or den.constant_value() == 0:
            raise ParseError("division only by nonzero constants", node.line, node.col)
        return num * Poly.const(1 / Fraction(den.constant_value()))
    if op == "^":
        if len(args) != 2 or not isinstance(args[1], _Tok) or not _INT.match(args[1].text):
            raise ParseError("'^' takes a term and an integer exponent", node.line, node.col)
        e = int(args[1].text)
        if e < 0:
            raise ParseError("negative exponent", node.line, node.col)
        return _term(args[0]) ** e
    raise ParseError(f"unknown term operator {op!r}", node.line, node.col)


def _formula(node) -> QFFormula:
    if isinstance(node, _Tok):
        if node.text == "true":
            return TRUE
        if node.text == "false":
            return FALSE
        raise ParseError(f"expected formula, got {node.text!r}", node.line, node.col)
    op = _head(node)
    args = node.items[1:]
    if op in ("and", "or"):
        if not args:
            raise ParseError(f"'{op}' needs at least one argument", node.line, node.col)
        subs = tuple(_formula(a) for a in args)
        return (mk_and if op == "and" else mk_or)(subs)
    if op == "not":
        if len(args) != 1:
            raise ParseError("'not' takes one argument", node.line, node.col)
        return negate(_formula(args[0]))
    if op == "->":
        if len(args) != 2:
            raise ParseError("'->' takes two arguments", node.line, node.col)
        a, b = (_formula(x) for x in args)
        return mk_or((negate(a), b))
    if op == "<->":
        if len(args) != 2:
            raise ParseError("'<->' takes two arguments", node.line, node.col)
        a, b = (_formula(x) for x in args)
        return mk_or((mk_and((a, b)), mk_and((negate(a), negate(b)))))
    if op in _REL_OPS:
        if len(args) < 2:
            raise ParseError(f"'{op}' takes at least two arguments", node.line, node.col)
        terms = [_term(a) for a in args]
        return mk_and(Atom(_clear_denominators(l - r), op) for l, r in zip(terms, terms[1:]))
    if op in ("exists", "forall"):
        if op == "forall":
            raise UnsupportedQuantifier("universal quantifiers are not supported",
                                        node.line, node.col)
        raise UnsupportedQuantifier("quantifier below the top-level prenex block",
                                    node.line, node.col)
    raise ParseError(f"unknown operator {op!r}", node.line, node.col)


def parse(text: str) -> ExistsBlock | QFFormula:
    node = _read(_tokenize(text))
    outer_first: list[str] = []
    while _head(node) in ("exists", "forall"):
        if _head(node) == "forall":
            raise UnsupportedQuantifier("universal quantifiers are not supported",
                                        node.line, node.col)
        if len(node.items) != 3 or not isinstance(node.items[1], _List):
            raise ParseError("expected (exists (vars...) body)", node.line, node.col)
        for t in node.items[1].items:
            if not isinstance(t, _Tok) or not _IDENT.match(t.text):
                raise ParseError("bad quantified variable", node.line, node.col)
            outer_first.append(t.text)
        node = node.items[2]
    matrix = _formula(node)
    if not outer_first:
        return matrix
    if len(set(outer_first)) != len(outer_first):
        raise ParseError("variable quantified twice")
    return ExistsBlock(tuple(reversed(outer_first)), matrix)


# ---------------------------------------------------------------------------
# printer


def poly_to_sexpr(p: Poly) -> str:
    if p.is_zero():
        return "0"
    terms = []
    for m, c in p.sorted_terms():
        factors = [v if e == 1 else f"(^ {v} {e})" for v, e in m]
        cs = _num_to_sexpr(c)
        if not factors:
            terms.append(cs)
        elif c == 1:
            terms.append(factors[0] if len(factors) == 1 else f"(* {' '.join(factors)})")
        else:
            terms.append(f"(* {cs} {' '.join(factors)})")
    return terms[0] if len(terms) == 1 else f"(+ {' '.join(terms)})"


def _num_to_sexpr(c: Number) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"(/ {c.numerator} {c.denominator})"


def to_text(f: ExistsBlock | QFFormula) -> str:
    if isinstance(f, ExistsBlock):
        vs = " ".join(reversed(f.quantified))
        return f"(exists ({vs}) {to_text(f.matrix)})"
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Atom):
        return f"({f.rel} {poly_to_sexpr(f.lhs)} 0)"
    op = "and" if isinstance(f, And) else "or"
    return f"({op} {' '.join(to_text(a) for a in f.args)})"


def to_infix(f: QFFormula) -> str:
    """Human-readable rendering used in tables."""
    if isinstance(f, (TrueF, FalseF)):
        return str(f)
    if isinstance(f, Atom):
        return f"{f.lhs} {f.rel} 0"
    op = " and " if isinstance(f, And) else " or "
    return op.join(f"({to_infix(a)})" if isinstance(a, (And, Or)) else to_infix(a)
                   for a in f.args)

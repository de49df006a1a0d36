"""Exact integer/rational polynomial arithmetic.

`Poly` is a sparse multivariate polynomial over the rationals (coefficients
are kept as ``int`` whenever they are integral).  Univariate helpers work on
plain coefficient tuples in ascending degree order; those are what the root
isolation and real algebraic number code operates on.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, isqrt, lcm
from typing import Iterable, Mapping, Optional, Sequence, Union

Number = Union[int, Fraction]
Monomial = tuple[tuple[str, int], ...]
UniPoly = tuple[Number, ...]


class DegreeTooHigh(Exception):
    def __init__(self, var: str, degree: int):
        super().__init__(f"degree {degree} of {var} exceeds 2")
        self.var = var
        self.degree = degree


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Poly:
    """Sparse multivariate polynomial; immutable, hashable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        self.terms: dict[Monomial, Number] = {}
        if terms:
            for m, c in terms.items():
                if c != 0:
                    self.terms[m] = _norm(c)
        self._hash = None

    @classmethod
    def var(cls, name: str) -> Poly:
        return cls({((name, 1),): 1})

    @classmethod
    def const(cls, c: Number) -> Poly:
        return cls({(): c})

    @staticmethod
    def coerce(x) -> Poly:
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return Poly.const(x)
        raise TypeError(f"cannot coerce {x!r} to Poly")

    # ring operations

    def __add__(self, other) -> Poly:
        other = Poly.coerce(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            res[m] = res.get(m, 0) + c
        return Poly(res)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Poly:
        return self + (-Poly.coerce(other))

    def __rsub__(self, other) -> Poly:
        return Poly.coerce(other) - self

    def __mul__(self, other) -> Poly:
        other = Poly.coerce(other)
        if not self.terms or not other.terms:
            return ZERO
        res: dict[Monomial, Number] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                res[m] = res.get(m, 0) + c1 * c2
        return Poly(res)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative exponent")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((), 0)

    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self.terms for v, _ in m)

    def degree(self, v: str) -> int:
        """Degree in `v`; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(dict(m).get(v, 0) for m in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e for _, e in m) for m in self.terms)

    def exponents(self, v: str) -> set[int]:
        return {dict(m).get(v, 0) for m in self.terms}

    def coeffs_in(self, v: str) -> dict[int, Poly]:
        """Split into ``{k: coefficient of v**k}`` with v-free coefficients."""
        parts: dict[int, dict[Monomial, Number]] = {}
        for m, c in self.terms.items():
            k = 0
            rest = []
            for w, e in m:
                if w == v:
                    k = e
                else:
                    rest.append((w, e))
            parts.setdefault(k, {})[tuple(rest)] = c
        return {k: Poly(t) for k, t in parts.items()}

    def coeff_list(self, v: str) -> list[Poly]:
        cs = self.coeffs_in(v)
        if not cs:
            return []
        return [cs.get(k, ZERO) for k in range(max(cs) + 1)]

    @classmethod
    def from_coeff_list(cls, coeffs: Sequence[Poly], v: str) -> Poly:
        x = cls.var(v)
        acc = ZERO
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    # substitution and evaluation

    def subs(self, mapping: Mapping[str, Poly | Number]) -> Poly:
        """Simultaneous substitution of polynomials (or numbers) for variables."""
        mapping = {v: Poly.coerce(p) for v, p in mapping.items()}
        acc: dict[Monomial, Number] = {}
        result = ZERO
        cache: dict[tuple[str, int], Poly] = {}
        for m, c in self.terms.items():
            kept = []
            factor = None
            for v, e in m:
                if v in mapping:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = mapping[v] ** e
                    factor = cache[key] if factor is None else factor * cache[key]
                else:
                    kept.append((v, e))
            if factor is None:
                acc[tuple(kept)] = acc.get(tuple(kept), 0) + c
            else:
                result = result + factor * Poly({tuple(kept): c})
        return result + Poly(acc)

    def evaluate(self, point: Mapping[str, Number]) -> Number:
        """Exact value at a rational point covering all variables."""
        total: Number = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                try:
                    t = t * Fraction(point[v]) ** e
                except KeyError:
                    raise KeyError(f"no value for variable {v}") from None
            total += t
        return _norm(Fraction(total))

    def derivative(self, v: str, order: int = 1) -> Poly:
        if order < 0:
            raise ValueError("negative derivative order")
        p = self
        for _ in range(order):
            res: dict[Monomial, Number] = {}
            for m, c in p.terms.items():
                d = dict(m)
                e = d.get(v, 0)
                if e == 0:
                    continue
                if e == 1:
                    del d[v]
                else:
                    d[v] = e - 1
                nm = tuple(sorted(d.items()))
                res[nm] = res.get(nm, 0) + c * e
            p = Poly(res)
        return p

    # content / normalisation

    def content(self) -> Fraction:
        """Positive rational c with self / c having coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        nums = [Fraction(c).numerator for c in self.terms.values()]
        dens = [Fraction(c).denominator for c in self.terms.values()]
        return Fraction(abs(reduce(gcd, nums)), reduce(lcm, dens))

    def primitive(self) -> Poly:
        """Integer primitive part; sign is preserved."""
        if not self.terms:
            return self
        c = self.content()
        return Poly({m: v / c for m, v in self.terms.items()})

    def leading_term(self, order: Sequence[str] | None = None) -> tuple[Monomial, Number]:
        """Leading term in lexicographic order over `order` (default: sorted names)."""
        if order is None:
            order = sorted(self.variables())
        key = _lex_key(order)
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def lc_grlex(self) -> Number:
        order = sorted(self.variables())
        m = max(self.terms, key=lambda m: (sum(e for _, e in m), _lex_key(order)(m)))
        return self.terms[m]

    def exact_div(self, other: Poly) -> Poly:
        """Quotient of an exact division; raises ArithmeticError otherwise."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if other.is_constant():
            c = Fraction(other.constant_value())
            return Poly({m: Fraction(v) / c for m, v in self.terms.items()})
        order = sorted(self.variables() | other.variables())
        key = _lex_key(order)
        lm, lc = other.leading_term(order)
        lmd = dict(lm)
        rem = dict(self.terms)
        quot: dict[Monomial, Number] = {}
        while rem:
            m = max(rem, key=key)
            c = rem[m]
            md = dict(m)
            q = {}
            for v, e in lmd.items():
                if md.get(v, 0) < e:
                    raise ArithmeticError("inexact polynomial division")
            for v, e in md.items():
                r = e - lmd.get(v, 0)
                if r:
                    q[v] = r
            qm = tuple(sorted(q.items()))
            qc = _norm(Fraction(c) / lc)
            quot[qm] = qc
            for om, oc in other.terms.items():
                pm = _mono_mul(qm, om)
                nv = rem.get(pm, 0) - qc * oc
                if nv == 0:
                    rem.pop(pm, None)
                else:
                    rem[pm] = nv
        return Poly(quot)

    # univariate conversion

    def to_uni(self, v: str | None = None) -> UniPoly:
        vs = self.variables()
        if v is None:
            if len(vs) > 1:
                raise ValueError(f"{self} is not univariate")
            v = next(iter(vs)) if vs else "x"
        elif vs - {v}:
            raise ValueError(f"{self} is not univariate in {v}")
        if not self.terms:
            return ()
        out = [0] * (self.degree(v) + 1)
        for m, c in self.terms.items():
            out[dict(m).get(v, 0)] = c
        return tuple(out)

    @classmethod
    def from_uni(cls, coeffs: Sequence[Number], v: str) -> Poly:
        return cls({((v, k),) if k else (): c for k, c in enumerate(coeffs)})

    # printing

    def sorted_terms(self) -> list[tuple[Monomial, Number]]:
        """Terms in descending graded lexicographic order."""
        order = sorted(self.variables())
        lex = _lex_key(order)
        return sorted(self.terms.items(),
                      key=lambda t: (sum(e for _, e in t[0]), lex(t[0])),
                      reverse=True)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", s))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out


def _lex_key(order: Sequence[str]):
    def key(m: Monomial):
        d = dict(m)
        return tuple(d.get(v, 0) for v in order)
    return key


ZERO = Poly()
ONE = Poly.const(1)


def quad_view(p: Poly, v: str) -> tuple[Poly, Poly, Poly]:
    """Coefficients (f2, f1, f0) of `p` as a polynomial of degree <= 2 in `v`."""
    deg = p.degree(v)
    if deg > 2:
        raise DegreeTooHigh(v, deg)
    cs = p.coeffs_in(v)
    return cs.get(2, ZERO), cs.get(1, ZERO), cs.get(0, ZERO)


def discriminant(f2: Poly, f1: Poly, f0: Poly) -> Poly:
    return f1 * f1 - 4 * f2 * f0


def _rational_sqrt(q: Number) -> Optional[Fraction]:
    q = Fraction(q)
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def poly_sqrt(p: Poly) -> Optional[Poly]:
    """s with s*s == p (leading coefficient of s positive), or None."""
    if p.is_zero():
        return Poly()
    order = sorted(p.variables())
    key = _lex_key(order)
    lm = max(p.terms, key=key)
    if any(e % 2 for _, e in lm):
        return None
    c = _rational_sqrt(p.terms[lm])
    if c is None:
        return None
    lead_m = tuple((v, e // 2) for v, e in lm)
    s = Poly({lead_m: _norm(c)})
    two_lead = dict(lead_m)
    for _ in range(len(p.terms) + 2):
        r = p - s * s
        if r.is_zero():
            return s
        m = max(r.terms, key=key)
        md = dict(m)
        if any(md.get(v, 0) < e for v, e in two_lead.items()):
            return None
        q = tuple(sorted((v, md.get(v, 0) - two_lead.get(v, 0)) for v in md
                         if md.get(v, 0) - two_lead.get(v, 0)))
        if key(q) >= key(lead_m) and q != ():
            return None
        s = s + Poly({q: _norm(Fraction(r.terms[m]) / (2 * c))})
    return None


def monomial_content(p: Poly) -> Monomial:
    """Largest monomial dividing every term of p."""
    if not p.terms:
        return ()
    common: Optional[dict[str, int]] = None
    for m in p.terms:
        md = dict(m)
        if common is None:
            common = md
        else:
            common = {v: min(e, md[v]) for v, e in common.items() if v in md}
    return tuple(sorted((v, e) for v, e in (common or {}).items() if e))


def poly_arith(op: str, p, q=None) -> Poly:
    """Ring operation by name: add, sub, mul, neg, or pow (q an int)."""
    p = Poly.coerce(p)
    if op == "neg":
        return -p
    if op == "pow":
        return p ** int(q)
    q = Poly.coerce(q)
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def exponent_gcd(p: Poly, v: str) -> int:
    """GCD of all positive exponents of `v` in `p` (0 if `v` does not occur)."""
    return reduce(gcd, (e for e in p.exponents(v) if e), 0)


def eval_at_rationals(p: Poly, point: Mapping[str, Number]) -> Number:
    return p.evaluate(point)


def resultant(p: Poly, q: Poly, v: str) -> Poly:
    """Res_v(p, q) by the subresultant polynomial remainder sequence."""
    if p.is_zero() or q.is_zero():
        return ZERO
    A = p.coeff_list(v)
    B = q.coeff_list(v)
    if len(A) == 1 or len(B) == 1:
        # a constant in v: Res = a^deg(q) (or b^deg(p))
        if len(A) == 1:
            return A[0] ** (len(B) - 1)
        return B[0] ** (len(A) - 1)
    s = 1
    if len(A) < len(B):
        A, B = B, A
        if (len(A) - 1) % 2 and (len(B) - 1) % 2:
            s = -s
    g = ONE
    h = ONE
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = _prem(A, B)
        if not R:
            return ZERO
        A = B
        div = g * h ** delta
        B = [c.exact_div(div) for c in R]
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).exact_div(h ** (delta - 1))
        if len(B) == 1:
            dA = len(A) - 1
            if dA == 0:
                res = B[0]
            elif dA == 1:
                res = B[0]
            else:
                res = (B[0] ** dA).exact_div(h ** (dA - 1))
            return res * s


def _prem(A: list[Poly], B: list[Poly]) -> list[Poly]:
    """Pseudo-remainder of coefficient lists (ascending); trimmed."""
    R = list(A)
    db = len(B) - 1
    lb = B[-1]
    e = len(A) - len(B) + 1
    while len(R) - 1 >= db and R:
        lr = R[-1]
        shift = len(R) - 1 - db
        R = [c * lb for c in R]
        for i, bc in enumerate(B):
            R[i + shift] = R[i + shift] - lr * bc
        R.pop()
        while R and R[-1].is_zero():
            R.pop()
        e -= 1
    if e > 0:
        f = lb ** e
        R = [c * f for c in R]
    return R


# ---------------------------------------------------------------------------
# univariate helpers (ascending coefficient tuples)


def up_trim(p: Iterable[Number]) -> UniPoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(_norm(Fraction(c)) if isinstance(c, Fraction) else c for c in p)


def up_degree(p: UniPoly) -> int:
    return len(p) - 1


def up_eval(p: UniPoly, x: Number) -> Number:
    acc: Number = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def up_sign_at(p: UniPoly, x: Number) -> int:
    v = up_eval(p, x)
    return (v > 0) - (v < 0)


def up_add(p: UniPoly, q: UniPoly) -> UniPoly:
    n = max(len(p), len(q))
    return up_trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                   for i in range(n))


def up_mul(p: UniPoly, q: UniPoly) -> UniPoly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return up_trim(out)


def up_neg(p: UniPoly) -> UniPoly:
    return tuple(-c for c in p)


def up_derivative(p: UniPoly) -> UniPoly:
    return up_trim(k * c for k, c in enumerate(p) if k)


def up_divmod(p: UniPoly, q: UniPoly) -> tuple[UniPoly, UniPoly]:
    if not q:
        raise ZeroDivisionError("univariate division by zero")
    r = [Fraction(c) for c in p]
    dq = len(q) - 1
    lq = Fraction(q[-1])
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] / lq
        quot[k] = c
        if c:
            for i, b in enumerate(q):
                r[k + i] -= c * b
    return up_trim(quot), up_trim(r[:dq])


def up_monic(p: UniPoly) -> UniPoly:
    lc = Fraction(p[-1])
    return up_trim(Fraction(c) / lc for c in p)


def up_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd over Q (zero if both are zero)."""
    p, q = up_trim(p), up_trim(q)
    while q:
        p, q = q, up_divmod(p, q)[1]
    return up_monic(p) if p else ()


def up_primitive(p: UniPoly) -> UniPoly:
    """Integer primitive associate with positive leading coefficient."""
    p = up_trim(p)
    if not p:
        return p
    fr = [Fraction(c) for c in p]
    den = reduce(lcm, (c.denominator for c in fr))
    ints = [int(c * den) for c in fr]
    g = reduce(gcd, ints)
    if ints[-1] < 0:
        g = -g
    return tuple(c // g for c in ints)


def up_squarefree(p: UniPoly) -> UniPoly:
    """Squarefree part, primitive with positive leading coefficient."""
    p = up_trim(p)
    if len(p) <= 1:
        return up_primitive(p)
    g = up_gcd(p, up_derivative(p))
    if len(g) > 1:
        p = up_divmod(p, g)[0]
    return up_primitive(p)


def up_compose_neg(p: UniPoly) -> UniPoly:
    """p(-x)."""
    return tuple(c if k % 2 == 0 else -c for k, c in enumerate(p))


def up_reverse(p: UniPoly) -> UniPoly:
    """x^deg p(1/x), with trailing zero roots removed first."""
    p = up_trim(p)
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    return up_trim(reversed(p[k:]))


def up_to_str(p: UniPoly, v: str = "x") -> str:
    return str(Poly.from_uni(p, v))


def cauchy_root_bound(p: UniPoly) -> Fraction:
    """B = 1 + max |a_i / a_n|; every real root lies strictly inside ]-B, B[."""
    p = up_trim(p)
    if not p:
        raise ValueError("zero polynomial has no root bound")
    lead = abs(Fraction(p[-1]))
    if len(p) == 1:
        return Fraction(1)
    return 1 + max(abs(Fraction(c)) for c in p[:-1]) / lead


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [up_trim(p), up_derivative(up_trim(p))]
    while seq[-1]:
        r = up_divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(up_neg(r))
    return [s for s in seq if s]


def sign_variations(seq: Sequence[UniPoly], x: Number) -> int:
    signs = [s for s in (up_sign_at(p, x) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq: Sequence[UniPoly], a: Number, b: Number) -> int:
    """Number of distinct roots in ]a, b] (Sturm's theorem)."""
    return sign_variations(seq, a) - sign_variations(seq, b)


def sturm_isolate(p: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open rational intervals, one around each distinct real root.

    Endpoints are never roots.  Intervals are returned in increasing order.
    """
    sq = up_squarefree(p)
    if len(sq) <= 1:
        return []
    seq = sturm_sequence(sq)
    B = cauchy_root_bound(sq)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(seq, lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = _split_point(sq, lo, hi)
        stack.append((mid, hi))
        stack.append((lo, mid))
    return sorted(out)


def _split_point(p: UniPoly, lo: Fraction, hi: Fraction) -> Fraction:
    """A non-root near the midpoint of ]lo, hi[."""
    for num, den in ((1, 2), (1, 3), (2, 3), (1, 4), (3, 4)):
        m = lo + (hi - lo) * num / den
        if up_eval(p, m) != 0:
            return m
    k = 5
    while True:
        m = lo + (hi - lo) / k
        if up_eval(p, m) != 0:
            return m
        k += 1


# aliases under the names used in the docs
squarefree_part = up_squarefree
gcd_univariate = up_gcd
primitive_part = up_primitive

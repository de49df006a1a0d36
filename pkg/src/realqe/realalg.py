"""Real algebraic numbers and back-substituted answer expressions.

A `RealAlgebraicNumber` is a squarefree primitive integer polynomial together
with an open rational interval containing exactly one of its roots.
Arithmetic goes through resultants; the right root of the resultant is picked
by refining the operands until an interval enclosure isolates it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, isqrt, lcm
from typing import Mapping, Optional, Union

from .arith import (
    Number, Poly, UniPoly, count_roots, resultant, sturm_isolate, sturm_sequence,
    up_compose_neg, up_eval, up_primitive, up_reverse, up_squarefree, up_to_str,
    up_trim,
)


class AlgebraicError(ArithmeticError):
    pass


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class RealAlgebraicNumber:
    defining: tuple[int, ...]
    lo: Fraction
    hi: Fraction

    @classmethod
    def from_rational(cls, q: Number) -> RealAlgebraicNumber:
        q = Fraction(q)
        p, d = q.numerator, q.denominator
        r = Fraction(abs(p) + 1, d)
        return cls((-p, d), -r, r)

    @property
    def degree(self) -> int:
        return len(self.defining) - 1

    def rational_value(self) -> Optional[Fraction]:
        """The value if the defining polynomial is linear (no search)."""
        if self.degree == 1:
            return Fraction(-self.defining[0], self.defining[1])
        return None

    def width(self) -> Fraction:
        return self.hi - self.lo

    def refine(self) -> RealAlgebraicNumber:
        """Halve the isolating interval by bisection."""
        p, lo, hi = self.defining, self.lo, self.hi
        mid = (lo + hi) / 2
        sm = _sgn(up_eval(p, mid))
        if sm == 0:
            q = (hi - lo) / 4
            return RealAlgebraicNumber(p, mid - q, mid + q)
        if _sgn(up_eval(p, lo)) * sm < 0:
            return RealAlgebraicNumber(p, lo, mid)
        return RealAlgebraicNumber(p, mid, hi)

    def refined_to(self, width: Fraction) -> RealAlgebraicNumber:
        x = self
        while x.width() > width:
            x = x.refine()
        return x

    def compare_rational(self, q: Number) -> int:
        """Sign of (self - q): -1, 0 or +1."""
        q = Fraction(q)
        x = self
        while x.lo < q < x.hi:
            if up_eval(x.defining, q) == 0:
                return 0
            x = x.refine()
        return 1 if x.lo >= q else -1

    def sign(self) -> int:
        return self.compare_rational(0)

    def __neg__(self) -> RealAlgebraicNumber:
        return RealAlgebraicNumber(up_primitive(up_compose_neg(self.defining)),
                                   -self.hi, -self.lo)

    def __add__(self, other):
        return ran_add(self, _as_ran(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ran_add(self, -_as_ran(other))

    def __rsub__(self, other):
        return ran_add(_as_ran(other), -self)

    def __mul__(self, other):
        return ran_mul(self, _as_ran(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ran_div(self, _as_ran(other))

    def __str__(self) -> str:
        q = self.rational_value()
        if q is not None:
            return str(q)
        return f"root({up_to_str(self.defining)}, ]{self.lo}, {self.hi}[)"


RAN = RealAlgebraicNumber


def _as_ran(x) -> RealAlgebraicNumber:
    if isinstance(x, RealAlgebraicNumber):
        return x
    return RealAlgebraicNumber.from_rational(x)


def ran_from_root(p: Union[UniPoly, Poly], which) -> RealAlgebraicNumber:
    """The root of `p` selected by an interval ``(lo, hi)`` or an index."""
    if isinstance(p, Poly):
        p = p.to_uni()
    sq = up_squarefree(up_trim(p))
    if len(sq) <= 1:
        raise AlgebraicError("polynomial has no roots")
    if isinstance(which, int):
        ivs = sturm_isolate(sq)
        if not -len(ivs) <= which < len(ivs):
            raise AlgebraicError(f"root index {which} out of range")
        lo, hi = ivs[which]
        return RealAlgebraicNumber(sq, lo, hi)
    lo, hi = Fraction(which[0]), Fraction(which[1])
    if up_eval(sq, lo) == 0 or up_eval(sq, hi) == 0:
        raise AlgebraicError("interval endpoint is a root")
    n = count_roots(sturm_sequence(sq), lo, hi)
    if n == 0:
        raise AlgebraicError(f"no root of {up_to_str(sq)} in ]{lo}, {hi}[")
    if n > 1:
        raise AlgebraicError(f"]{lo}, {hi}[ contains {n} roots")
    return RealAlgebraicNumber(sq, lo, hi)


# ---------------------------------------------------------------------------
# arithmetic


def _select(r: UniPoly, image, operands):
    """Refine `operands` until ``image(*operands)`` isolates one root of r."""
    sq = up_squarefree(r)
    if len(sq) <= 1:
        raise AlgebraicError("resultant vanished identically")
    seq = sturm_sequence(sq)
    ops = list(operands)
    prec = 4
    while True:
        lo, hi = image(*ops, prec=prec)
        if (up_eval(sq, lo) != 0 and up_eval(sq, hi) != 0
                and count_roots(seq, lo, hi) == 1):
            return _shrink(RealAlgebraicNumber(sq, lo, hi))
        ops = [o.refine() for o in ops]
        prec += 2


def _shrink(x: RealAlgebraicNumber) -> RealAlgebraicNumber:
    """Replace a nonlinear defining polynomial by a linear one for rationals."""
    if x.degree > 1:
        q = rational_recognition(x)
        if q is not None:
            return RealAlgebraicNumber.from_rational(q)
    return x


def _widen(lo: Fraction, hi: Fraction, *ops) -> tuple[Fraction, Fraction]:
    w = max(o.width() for o in ops)
    return lo - w, hi + w


def _poly_z_minus_y(p: UniPoly) -> Poly:
    """p(z - y) as a bivariate polynomial."""
    z, y = Poly.var("z"), Poly.var("y")
    return Poly.from_coeff_list([Poly.const(c) for c in p], "_t").subs({"_t": z - y})


def ran_add(x: RealAlgebraicNumber, y: RealAlgebraicNumber) -> RealAlgebraicNumber:
    qx, qy = x.rational_value(), y.rational_value()
    if qx is not None and qy is not None:
        return RealAlgebraicNumber.from_rational(qx + qy)
    if qx is not None:
        x, y, qx, qy = y, x, qy, qx
    if qy is not None:
        # p(z - q) has the shifted root
        shifted = Poly.from_uni(x.defining, "z").subs({"z": Poly.var("z") - qy})
        return RealAlgebraicNumber(up_primitive(shifted.to_uni("z")), x.lo + qy, x.hi + qy)
    r = resultant(Poly.from_uni(y.defining, "y"), _poly_z_minus_y(x.defining), "y")
    return _select(r.to_uni("z"),
                   lambda a, b, prec: _widen(a.lo + b.lo, a.hi + b.hi, a, b), (x, y))


def _mul_image(a, b, prec):
    prods = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
    return _widen(min(prods), max(prods), a, b)


def ran_mul(x: RealAlgebraicNumber, y: RealAlgebraicNumber) -> RealAlgebraicNumber:
    qx, qy = x.rational_value(), y.rational_value()
    if qx is not None and qy is not None:
        return RealAlgebraicNumber.from_rational(qx * qy)
    if qx is not None:
        x, y, qx, qy = y, x, qy, qx
    if qy is not None:
        if qy == 0:
            return RealAlgebraicNumber.from_rational(0)
        scaled = Poly.from_uni(x.defining, "z").subs({"z": Poly.var("z") * (1 / Fraction(qy))})
        ends = sorted((x.lo * qy, x.hi * qy))
        return RealAlgebraicNumber(up_primitive(scaled.to_uni("z")), ends[0], ends[1])
    if x.sign() == 0 or y.sign() == 0:
        return RealAlgebraicNumber.from_rational(0)
    # y^n p(z / y)
    n = x.degree
    z, yv = Poly.var("z"), Poly.var("y")
    hom = sum((c * z ** k * yv ** (n - k) for k, c in enumerate(x.defining)), Poly())
    r = resultant(Poly.from_uni(y.defining, "y"), hom, "y")
    return _select(r.to_uni("z"), _mul_image, (x, y))


def ran_inverse(x: RealAlgebraicNumber) -> RealAlgebraicNumber:
    s = x.sign()
    if s == 0:
        raise ZeroDivisionError("division by zero real algebraic number")
    q = x.rational_value()
    if q is not None:
        return RealAlgebraicNumber.from_rational(1 / q)
    while x.lo < 0 < x.hi or x.lo == 0 or x.hi == 0:
        x = x.refine()
    return RealAlgebraicNumber(up_primitive(up_reverse(x.defining)), 1 / x.hi, 1 / x.lo)


def ran_div(x: RealAlgebraicNumber, y: RealAlgebraicNumber) -> RealAlgebraicNumber:
    return ran_mul(x, ran_inverse(y))


def _root_floor(q: Fraction, g: int, k: int) -> Fraction:
    """Rational lower bound on q**(1/g) (q >= 0) with 2**-k resolution."""
    n = floor(q * 2 ** (g * k))
    return Fraction(_iroot(n, g), 2 ** k)


def _root_ceil(q: Fraction, g: int, k: int) -> Fraction:
    n = ceil(q * 2 ** (g * k))
    return Fraction(_iroot(n, g) + 1, 2 ** k)


def _iroot(n: int, g: int) -> int:
    """floor(n ** (1/g)) for n >= 0."""
    if n < 2:
        return n
    if g == 2:
        return isqrt(n)
    r = 1 << ((n.bit_length() + g - 1) // g)
    while True:
        s = ((g - 1) * r + n // r ** (g - 1)) // g
        if s >= r:
            break
        r = s
    while r ** g > n:
        r -= 1
    while (r + 1) ** g <= n:
        r += 1
    return r


def ran_nthroot(x: RealAlgebraicNumber, g: int) -> RealAlgebraicNumber:
    if g < 1:
        raise ValueError("root index must be positive")
    if g == 1:
        return x
    s = x.sign()
    if s == 0:
        return RealAlgebraicNumber.from_rational(0)
    if s < 0:
        if g % 2 == 0:
            raise AlgebraicError("even root of a negative number")
        return -ran_nthroot(-x, g)
    while x.lo < 0:
        x = x.refine()
    # p(z^g)
    r = [0] * ((len(x.defining) - 1) * g + 1)
    for k, c in enumerate(x.defining):
        r[k * g] = c
    r = tuple(r)
    q = x.rational_value()
    if q is not None:
        num, den = q.numerator, q.denominator
        rn, rd = _iroot(num, g), _iroot(den, g)
        if rn ** g == num and rd ** g == den:
            return RealAlgebraicNumber.from_rational(Fraction(rn, rd))

    def image(a, prec):
        return _widen(_root_floor(a.lo, g, prec), _root_ceil(a.hi, g, prec), a)
    return _select(r, image, (x,))


def ran_sqrt(x: RealAlgebraicNumber) -> RealAlgebraicNumber:
    return ran_nthroot(x, 2)


def ran_pow(x: RealAlgebraicNumber, e: int) -> RealAlgebraicNumber:
    if e < 0:
        raise ValueError("negative exponent")
    q = x.rational_value()
    if q is not None:
        return RealAlgebraicNumber.from_rational(q ** e)
    if e == 0:
        return RealAlgebraicNumber.from_rational(1)
    if e == 1:
        return x
    return _eval_uni(tuple([0] * e + [1]), x)


def _interval_horner(p: UniPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    a = b = Fraction(0)
    for c in reversed(p):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def _eval_uni(p: UniPoly, x: RealAlgebraicNumber) -> RealAlgebraicNumber:
    """p(x) for a univariate rational polynomial p."""
    p = up_trim(p)
    if len(p) <= 1:
        return RealAlgebraicNumber.from_rational(p[0] if p else 0)
    q = x.rational_value()
    if q is not None:
        return RealAlgebraicNumber.from_rational(up_eval(p, q))
    z = Poly.var("z")
    r = resultant(Poly.from_uni(x.defining, "y"), z - Poly.from_uni(p, "y"), "y")

    def image(a, prec):
        lo, hi = _interval_horner(p, a.lo, a.hi)
        return _widen(lo, hi, a)
    return _select(r.to_uni("z"), image, (x,))


ran_arith_ops = {
    "add": ran_add,
    "sub": lambda x, y: ran_add(x, -y),
    "mul": ran_mul,
    "div": ran_div,
    "neg": lambda x, y=None: -x,
    "sqrt": lambda x, y=None: ran_sqrt(x),
}


def ran_arith(op: str, x: RealAlgebraicNumber, y=None, g: int | None = None):
    """Dispatch by name: add, sub, mul, div, neg, sqrt, nthroot (with `g`)."""
    if op == "nthroot":
        return ran_nthroot(x, g)
    fn = ran_arith_ops[op]
    return fn(x, y) if op not in ("neg", "sqrt") else fn(x)


def ran_sign(x: RealAlgebraicNumber) -> int:
    return x.sign()


def ran_compare_rational(x: RealAlgebraicNumber, q: Number) -> int:
    return x.compare_rational(q)


def ran_equal(x: RealAlgebraicNumber, y: RealAlgebraicNumber) -> bool:
    return ran_add(x, -y).sign() == 0


def sign_of_uni_at(p: UniPoly, x: RealAlgebraicNumber) -> int:
    """Sign of p(x) without building p(x) as an algebraic number."""
    p = up_trim(p)
    if not p:
        return 0
    q = x.rational_value()
    if q is not None:
        return _sgn(up_eval(p, q))
    from .arith import up_gcd
    g = up_gcd(p, x.defining)
    if len(g) > 1:
        # x is a root of p iff it is a root of the common factor
        gseq = sturm_sequence(up_squarefree(g))
        y = x
        while up_eval(g, y.lo) == 0 or up_eval(g, y.hi) == 0:
            y = y.refine()
        if count_roots(gseq, y.lo, y.hi) == 1:
            return 0
    seq = sturm_sequence(up_squarefree(p))
    y = x
    while True:
        if (up_eval(p, y.lo) != 0 and up_eval(p, y.hi) != 0
                and count_roots(seq, y.lo, y.hi) == 0):
            return _sgn(up_eval(p, y.lo))
        y = y.refine()


Value = Union[RealAlgebraicNumber, Fraction, int]


def eval_poly_at_rans(p: Poly, point: Mapping[str, Value]) -> RealAlgebraicNumber:
    """Value of p at a point whose coordinates are rationals or RANs."""
    rational = {}
    algebraic = {}
    for v in p.variables():
        if v not in point:
            raise KeyError(f"no value for variable {v}")
        val = point[v]
        if isinstance(val, RealAlgebraicNumber):
            q = val.rational_value()
            if q is None:
                algebraic[v] = val
                continue
            val = q
        rational[v] = Fraction(val)
    if rational:
        p = p.subs(rational)
    if not algebraic:
        return RealAlgebraicNumber.from_rational(p.constant_value() if p else 0)
    vs = sorted(algebraic)
    v = vs[0]
    if len(vs) == 1:
        return _eval_uni(p.to_uni(v), algebraic[v])
    # Horner in v over the remaining algebraic coordinates
    acc = RealAlgebraicNumber.from_rational(0)
    x = algebraic[v]
    rest = {w: algebraic[w] for w in vs[1:]}
    for c in reversed(p.coeff_list(v)):
        acc = ran_add(ran_mul(acc, x), eval_poly_at_rans(c, rest))
    return acc


def sign_poly_at(p: Poly, point: Mapping[str, Value]) -> int:
    """Exact sign of p at a point of rationals/RANs."""
    rational = {}
    algebraic = {}
    for v in p.variables():
        if v not in point:
            raise KeyError(f"no value for variable {v}")
        val = point[v]
        if isinstance(val, RealAlgebraicNumber):
            q = val.rational_value()
            if q is None:
                algebraic[v] = val
                continue
            val = q
        rational[v] = Fraction(val)
    if rational:
        p = p.subs(rational)
    if not algebraic:
        c = p.constant_value() if p else 0
        return _sgn(c)
    if len(algebraic) == 1:
        (v, x), = algebraic.items()
        return sign_of_uni_at(p.to_uni(v), x)
    return eval_poly_at_rans(p, algebraic).sign()


def refine(x: RealAlgebraicNumber) -> RealAlgebraicNumber:
    return x.refine()


def rational_recognition(x: RealAlgebraicNumber) -> Optional[Fraction]:
    """The value of x if it is rational, else None.

    Works on |x| > 0: refine until ]a0/u, a0/l[ holds at most one integer z,
    then a0/z is the only rational candidate.
    """
    q = x.rational_value()
    if q is not None:
        return q
    s = x.sign()
    if s == 0:
        return Fraction(0)
    if s < 0:
        r = rational_recognition(-x)
        return None if r is None else -r
    p = list(x.defining)
    while p[0] == 0:
        p.pop(0)
    if p[0] < 0:
        p = [-c for c in p]
    a0 = p[0]
    y = RealAlgebraicNumber(tuple(p), x.lo, x.hi)
    while y.lo <= 0:
        y = y.refine()
    while True:
        lo_z = floor(a0 / y.hi) + 1
        hi_z = ceil(a0 / y.lo) - 1
        if hi_z < lo_z:
            return None
        if hi_z == lo_z:
            cand = Fraction(a0, lo_z)
            return cand if up_eval(p, cand) == 0 else None
        y = y.refine()


def approx_decimal(x: RealAlgebraicNumber, digits: int) -> str:
    """`x` correctly rounded (half away from zero) to `digits` fractional digits."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    scale = 10 ** digits
    s = x.sign()
    if s == 0:
        return _fmt_scaled(0, digits, 1)
    y = x if s > 0 else -x
    while y.lo < 0:
        y = y.refine()
    while True:
        q = y.rational_value()
        if q is not None:
            n = floor(q * scale + Fraction(1, 2))
            break
        lo_n = floor(y.lo * scale + Fraction(1, 2))
        hi_n = floor(y.hi * scale + Fraction(1, 2))
        if lo_n == hi_n:
            n = lo_n
            break
        tie = Fraction(2 * hi_n - 1, 2 * scale)
        if y.lo < tie < y.hi and up_eval(y.defining, tie) == 0:
            n = hi_n
            break
        y = y.refine()
    return _fmt_scaled(n, digits, s)


def _fmt_scaled(n: int, digits: int, sign: int) -> str:
    ip, fp = divmod(n, 10 ** digits)
    return f"{'-' if sign < 0 and n else ''}{ip}.{fp:0{digits}d}"


# ---------------------------------------------------------------------------
# answer expressions

NONSTANDARD_PREFIXES = ("eps_", "inf_")


def is_nonstandard_var(v: str) -> bool:
    return v.startswith(NONSTANDARD_PREFIXES)


class AnswerExpression:
    """Expression tree over Q with sqrt, g-th roots and eps_i / inf_i leaves."""

    def leaves(self) -> set[str]:
        raise NotImplementedError

    def is_standard(self) -> bool:
        return not any(is_nonstandard_var(v) for v in self.leaves())

    def subs(self, v: str, e: AnswerExpression) -> AnswerExpression:
        raise NotImplementedError

    def evaluate(self, point: Mapping[str, Value]) -> RealAlgebraicNumber:
        raise NotImplementedError


_ONE = Poly.const(1)


def _poly_paren(p: Poly) -> str:
    s = str(p)
    return f"({s})" if len(p.terms) > 1 or s.startswith("-") else s


def _factor_paren(p: Poly) -> str:
    """p as a factor: parenthesized unless a single term."""
    s = str(p)
    return f"({s})" if len(p.terms) > 1 or "*" in s else s


@dataclass(frozen=True)
class Frac(AnswerExpression):
    num: Poly
    den: Poly

    @classmethod
    def of(cls, num: Poly, den: Poly | None = None) -> Frac:
        den = _ONE if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in answer")
        if den.is_constant():
            return cls(num * (1 / Fraction(den.constant_value())), _ONE)
        try:
            return cls(num.exact_div(den), _ONE)
        except ArithmeticError:
            pass
        c = (num.content() if num else Fraction(1)) / den.content()
        num = num.primitive() if num else num
        den = den.primitive()
        if den.lc_grlex() < 0:
            num, den = -num, -den
        return cls(num * c if num else num, den)

    def leaves(self) -> set[str]:
        return set(self.num.variables() | self.den.variables())

    def subs(self, v: str, e: AnswerExpression) -> AnswerExpression:
        if v not in self.leaves():
            return self
        if isinstance(e, Frac):
            return Frac.of(*_compose_frac(self.num, self.den, v, e))
        return Div(_horner_tree(self.num, v, e), _horner_tree(self.den, v, e))

    def evaluate(self, point):
        _require_standard(self)
        n = eval_poly_at_rans(self.num, point)
        if self.den.is_constant():
            return ran_mul(n, RealAlgebraicNumber.from_rational(1 / Fraction(self.den.constant_value())))
        return ran_div(n, eval_poly_at_rans(self.den, point))

    def __str__(self) -> str:
        if self.den == _ONE:
            return _frac_str(self.num)
        return f"{_factor_paren(self.num)}/{_factor_paren(self.den)}"


def _frac_str(p: Poly) -> str:
    """Show p with a common rational denominator pulled out."""
    if p.is_zero():
        return "0"
    c = p.content()
    if c.denominator == 1:
        return str(p)
    q = p * c.denominator
    s = str(q)
    if len(q.terms) > 1:
        s = f"({s})"
    return f"{s}/{c.denominator}"


def _compose_frac(num: Poly, den: Poly, v: str, e: Frac) -> tuple[Poly, Poly]:
    dn = max(num.degree(v), 0)
    dd = max(den.degree(v), 0)
    n2 = _homog(num, v, e, dn)
    d2 = _homog(den, v, e, dd)
    if dn > dd:
        d2 = d2 * e.den ** (dn - dd)
    elif dd > dn:
        n2 = n2 * e.den ** (dd - dn)
    return n2, d2


def _homog(p: Poly, v: str, e: Frac, deg: int) -> Poly:
    acc = Poly()
    for k, c in p.coeffs_in(v).items():
        acc = acc + c * e.num ** k * e.den ** (deg - k)
    return acc


def _square_part(c: Poly) -> tuple[Fraction, Poly]:
    """c = s^2 * r with s a positive rational; returns (s, r)."""
    k = c.content()
    num, den = k.numerator * k.denominator, k.denominator
    s, r = 1, num
    f = 2
    while f * f <= r and f < 1000:
        while r % (f * f) == 0:
            r //= f * f
            s *= f
        f += 1
    t = isqrt(r)
    if t * t == r:
        s, r = s * t, 1
    return Fraction(s, den), c.primitive() * r


@dataclass(frozen=True)
class Surd(AnswerExpression):
    """(a + b*sqrt(c)) / d with polynomial a, b, c, d."""
    a: Poly
    b: Poly
    c: Poly
    d: Poly

    @classmethod
    def of(cls, a: Poly, b: Poly, c: Poly, d: Poly | None = None) -> AnswerExpression:
        d = _ONE if d is None else d
        if d.is_zero():
            raise ZeroDivisionError("zero denominator in answer")
        if b.is_zero() or c.is_zero():
            return Frac.of(a, d)
        if c.is_constant() and c.constant_value() < 0:
            raise AlgebraicError("square root of a negative constant")
        s, c = _square_part(c)
        b = b * s
        if c == _ONE:
            return Frac.of(a + b, d)
        if d.is_constant():
            k = 1 / Fraction(d.constant_value())
            a, b, d = a * k, b * k, _ONE
        elif d.lc_grlex() < 0:
            a, b, d = -a, -b, -d
        return cls(a, b, c, d)

    def leaves(self):
        return set(self.a.variables() | self.b.variables() | self.c.variables()
                   | self.d.variables())

    def tree(self) -> AnswerExpression:
        root = BinOp("*", Frac.of(self.b), Radical(2, Frac.of(self.c)))
        return BinOp("/", BinOp("+", Frac.of(self.a), root), Frac.of(self.d))

    def subs(self, v, e):
        if v not in self.leaves():
            return self
        return _mk_bin("/", _mk_bin("+", Frac.of(self.a).subs(v, e),
                                    _mk_bin("*", Frac.of(self.b).subs(v, e),
                                            Radical(2, Frac.of(self.c).subs(v, e)))),
                       Frac.of(self.d).subs(v, e))

    def evaluate(self, point):
        _require_standard(self)
        a = eval_poly_at_rans(self.a, point)
        b = eval_poly_at_rans(self.b, point)
        c = eval_poly_at_rans(self.c, point)
        d = eval_poly_at_rans(self.d, point)
        return ran_div(ran_add(a, ran_mul(b, ran_sqrt(c))), d)

    def __str__(self):
        # pull a common rational denominator out of a and b
        den = lcm(self.a.content().denominator if self.a else 1,
                  self.b.content().denominator)
        a, b = self.a * den, self.b * den
        root = f"sqrt({self.c})"
        if b == _ONE:
            rs = root
        elif b == -_ONE:
            rs = "-" + root
        else:
            rs = f"{_factor_paren(b)}*{root}"
        if a.is_zero():
            num = rs
        elif rs.startswith("-"):
            num = f"{a} - {rs[1:]}"
        else:
            num = f"{a} + {rs}"
        dp = self.d * den
        if dp == _ONE:
            return num
        wrap = f"({num})" if not a.is_zero() or rs.startswith("-") or "*" in rs else num
        return f"{wrap}/{_factor_paren(dp)}"


def _as_surd(e: AnswerExpression):
    if isinstance(e, Surd):
        return e
    if isinstance(e, Frac):
        return Surd(e.num, Poly(), Poly(), e.den)
    if isinstance(e, Radical) and e.g == 2 and isinstance(e.arg, Frac):
        # sqrt(n/d) = sqrt(n*d)/d
        return Surd(Poly(), _ONE, e.arg.num * e.arg.den, e.arg.den)
    return None


def _same_radicand(x: Surd, y: Surd) -> Optional[Poly]:
    if x.b.is_zero():
        return y.c
    if y.b.is_zero() or x.c == y.c:
        return x.c
    return None


@dataclass(frozen=True)
class BinOp(AnswerExpression):
    op: str
    left: AnswerExpression
    right: AnswerExpression

    def leaves(self):
        return self.left.leaves() | self.right.leaves()

    def subs(self, v, e):
        return _mk_bin(self.op, self.left.subs(v, e), self.right.subs(v, e))

    def evaluate(self, point):
        a, b = self.left.evaluate(point), self.right.evaluate(point)
        return {"+": ran_add, "*": ran_mul, "/": ran_div}[self.op](a, b)

    def __str__(self):
        left, right = str(self.left), str(self.right)
        if self.op == "+":
            if right.startswith("-"):
                return f"{left} - ({right[1:]})" if " " in right else f"{left} - {right[1:]}"
            return f"{left} + {right}"
        if " " in left:
            left = f"({left})"
        if " " in right or (self.op == "/" and ("*" in right or "/" in right)):
            right = f"({right})"
        return f"{left}{self.op}{right}"


def Add(a, b):
    return _mk_bin("+", a, b)


def Mul(a, b):
    return _mk_bin("*", a, b)


def Div(a, b):
    return _mk_bin("/", a, b)


def _mk_bin(op, a, b) -> AnswerExpression:
    if isinstance(a, Frac) and isinstance(b, Frac):
        if op == "+":
            return Frac.of(a.num * b.den + b.num * a.den, a.den * b.den)
        if op == "*":
            return Frac.of(a.num * b.num, a.den * b.den)
        return Frac.of(a.num * b.den, a.den * b.num)
    x, y = _as_surd(a), _as_surd(b)
    if x is not None and y is not None:
        c = _same_radicand(x, y)
        if c is not None:
            if op == "+":
                return Surd.of(x.a * y.d + y.a * x.d, x.b * y.d + y.b * x.d, c, x.d * y.d)
            if op == "*":
                return Surd.of(x.a * y.a + x.b * y.b * c, x.a * y.b + x.b * y.a, c, x.d * y.d)
            if y.b.is_zero():
                return Surd.of(x.a * y.d, x.b * y.d, c, x.d * y.a)
    zero = Frac(Poly(), _ONE)
    one = Frac(_ONE, _ONE)
    if op == "+" and b == zero:
        return a
    if op == "+" and a == zero:
        return b
    if op in ("*", "/") and a == zero:
        return a
    if op in ("*", "/") and b == one:
        return a
    if op == "*" and a == one:
        return b
    return BinOp(op, a, b)


@dataclass(frozen=True)
class Radical(AnswerExpression):
    g: int
    arg: AnswerExpression

    def leaves(self):
        return self.arg.leaves()

    def subs(self, v, e):
        arg = self.arg.subs(v, e)
        if self.g == 2:
            s = _as_surd(Radical(2, arg))
            if s is not None:
                return Surd.of(s.a, s.b, s.c, s.d)
        return Radical(self.g, arg)

    def evaluate(self, point):
        return ran_nthroot(self.arg.evaluate(point), self.g)

    def __str__(self):
        if self.g == 2:
            return f"sqrt({self.arg})"
        return f"root{self.g}({self.arg})"


def _horner_tree(p: Poly, v: str, e: AnswerExpression) -> AnswerExpression:
    acc: AnswerExpression = Frac.of(Poly())
    for c in reversed(p.coeff_list(v)):
        acc = Add(Mul(acc, e), Frac.of(c))
    return acc


def _require_standard(e: AnswerExpression):
    if not e.is_standard():
        raise ValueError(f"cannot evaluate nonstandard answer {e}")


def expr_from_root(a: Poly, b: Poly, c: Poly, d: Poly) -> AnswerExpression:
    """(a + b*sqrt(c)) / d as an answer expression."""
    return Surd.of(a, b, c, d)


# ---------------------------------------------------------------------------
# exact evaluation of formulas


def formula_holds(f, point: Mapping[str, Value]) -> bool:
    """Truth of a quantifier-free formula at a rational / algebraic point."""
    from .formula import And, Atom, FalseF, Or, TrueF, rel_holds
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Atom):
        return rel_holds(f.rel, sign_poly_at(f.lhs, point))
    if isinstance(f, And):
        return all(formula_holds(a, point) for a in f.args)
    if isinstance(f, Or):
        return any(formula_holds(a, point) for a in f.args)
    raise TypeError(f"not a quantifier-free formula: {f!r}")


def univariate_samples(polys) -> list[Value]:
    """One point in every sign-invariant cell of the given univariate polys."""
    prod: UniPoly = (1,)
    from .arith import up_mul
    for p in polys:
        p = up_trim(p)
        if len(p) > 1:
            prod = up_mul(prod, up_squarefree(p))
    sq = up_squarefree(prod)
    if len(sq) <= 1:
        return [Fraction(0)]
    ivs = sturm_isolate(sq)
    if not ivs:
        return [Fraction(0)]
    out: list[Value] = [ivs[0][0] - 1]
    for i, (lo, hi) in enumerate(ivs):
        out.append(RealAlgebraicNumber(sq, lo, hi))
        # no root between hi and the next interval, so hi is a cell sample
        out.append(hi if i + 1 < len(ivs) else hi + 1)
    return out


def univariate_satisfiable(f, v: str) -> bool:
    """Exact satisfiability of a formula in the single variable v."""
    from .formula import atoms
    polys = [a.lhs.to_uni(v) for a in atoms(f)]
    return any(formula_holds(f, {v: s}) for s in univariate_samples(polys))

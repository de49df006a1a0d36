"""Reference decision procedures that share no code with the elimination kernel.

Fourier-Motzkin for linear formulas, root sampling for univariate ones,
and exact satisfaction checks of answer assignments.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Mapping, Union

from .arith import Number, Poly, sturm_isolate, up_squarefree, up_trim
from .formula import And, Atom, ExistsBlock, FalseF, Or, QFFormula, TrueF, atoms, variables
from .realalg import RealAlgebraicNumber, formula_holds, ran_equal

DEFAULT_MAX_DNF = 4096


class NonLinearError(ValueError):
    pass


class DNFTooLarge(RuntimeError):
    pass


def max_dnf() -> int:
    raw = os.environ.get("REALQE_MAX_DNF")
    return int(raw) if raw else DEFAULT_MAX_DNF


# A constraint sum(c_v * v) + k  (< 0 if strict else <= 0)
Constraint = tuple[dict[str, Fraction], Fraction, bool]


def _linear(p: Poly) -> tuple[dict[str, Fraction], Fraction]:
    coeffs: dict[str, Fraction] = {}
    k = Fraction(0)
    for mono, c in p.terms.items():
        if not mono:
            k = Fraction(c)
            continue
        if len(mono) != 1 or mono[0][1] != 1:
            raise NonLinearError(f"atom polynomial {p} is not linear")
        coeffs[mono[0][0]] = Fraction(c)
    return coeffs, k


def _neg(c: dict[str, Fraction]) -> dict[str, Fraction]:
    return {v: -x for v, x in c.items()}


def _atom_cases(a: Atom) -> list[list[Constraint]]:
    """Disjunction (outer) of conjunctions (inner) equivalent to a."""
    c, k = _linear(a.lhs)
    le = (c, k, False)
    lt = (c, k, True)
    ge = (_neg(c), -k, False)
    gt = (_neg(c), -k, True)
    return {
        "<": [[lt]], "<=": [[le]], ">": [[gt]], ">=": [[ge]],
        "=": [[le, ge]], "!=": [[lt], [gt]],
    }[a.rel]


def _dnf(f: QFFormula, cap: int) -> list[list[Constraint]]:
    if isinstance(f, TrueF):
        return [[]]
    if isinstance(f, FalseF):
        return []
    if isinstance(f, Atom):
        return _atom_cases(f)
    if isinstance(f, Or):
        out = []
        for g in f.args:
            out.extend(_dnf(g, cap))
            if len(out) > cap:
                raise DNFTooLarge(f"more than {cap} disjuncts")
        return out
    if isinstance(f, And):
        out = [[]]
        for g in f.args:
            part = _dnf(g, cap)
            out = [x + y for x in out for y in part]
            if len(out) > cap:
                raise DNFTooLarge(f"more than {cap} disjuncts")
        return out
    raise TypeError(f"not a quantifier-free formula: {f!r}")


def _combine(lo: Constraint, up: Constraint, v: str) -> Constraint:
    # lo has negative coefficient on v, up positive; scale both to +-1 and add
    cl, kl, sl = lo
    cu, ku, su = up
    a, b = -cl[v], cu[v]
    coeffs: dict[str, Fraction] = {}
    for w in set(cl) | set(cu):
        if w == v:
            continue
        x = cl.get(w, 0) / a + cu.get(w, 0) / b
        if x:
            coeffs[w] = x
    return coeffs, kl / a + ku / b, sl or su


def _fm_conjunction(cons: list[Constraint], order) -> bool:
    for v in order:
        lower, upper, rest = [], [], []
        for con in cons:
            x = con[0].get(v, 0)
            (lower if x < 0 else upper if x > 0 else rest).append(con)
        cons = rest + [_combine(l, u, v) for l in lower for u in upper]
    for c, k, strict in cons:
        if c:
            raise AssertionError("variable left after elimination")
        if (strict and not k < 0) or (not strict and not k <= 0):
            return False
    return True


def fourier_motzkin_decide(block: ExistsBlock) -> bool:
    if block.parameters:
        raise ValueError("formula has free variables: " + ", ".join(block.parameters))
    for a in atoms(block.matrix):
        _linear(a.lhs)
    return any(_fm_conjunction(conj, block.quantified)
               for conj in _dnf(block.matrix, max_dnf()))


def _sorted_roots(f: QFFormula, v: str) -> list[RealAlgebraicNumber]:
    roots: list[RealAlgebraicNumber] = []
    for a in atoms(f):
        p = up_trim(a.lhs.to_uni(v))
        if len(p) <= 1:
            continue
        sq = up_squarefree(p)
        for lo, hi in sturm_isolate(sq):
            r = RealAlgebraicNumber(sq, lo, hi)
            if not any(ran_equal(r, s) for s in roots):
                roots.append(r)
    # refine until pairwise disjoint, then sort by interval
    changed = True
    while changed:
        changed = False
        for i in range(len(roots)):
            for j in range(len(roots)):
                if i != j and roots[i].lo < roots[j].hi and roots[j].lo < roots[i].hi:
                    roots[i] = roots[i].refine()
                    roots[j] = roots[j].refine()
                    changed = True
    roots.sort(key=lambda r: r.lo)
    return roots


def univariate_sample_decide(block: ExistsBlock) -> bool:
    if len(block.quantified) != 1 or block.parameters:
        raise ValueError("need a closed formula with exactly one quantified variable")
    v = block.quantified[0]
    roots = _sorted_roots(block.matrix, v)
    if not roots:
        samples: list = [Fraction(0)]
    else:
        samples = [roots[0].lo - 1]
        for i, r in enumerate(roots):
            samples.append(r)
            if i + 1 < len(roots):
                samples.append((r.hi + roots[i + 1].lo) / 2)
        samples.append(roots[-1].hi + 1)
    return any(formula_holds(block.matrix, {v: s}) for s in samples)


def check_satisfaction(psi: QFFormula,
                       assignment: Mapping[str, Union[RealAlgebraicNumber, Number]]) -> bool:
    missing = variables(psi) - set(assignment)
    if missing:
        raise KeyError("no value for " + ", ".join(sorted(missing)))
    return formula_holds(psi, assignment)

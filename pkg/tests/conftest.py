import random
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

from realqe.arith import Poly
from realqe.formula import And, Atom, ExistsBlock, Or, mk_and, mk_or

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

x, y, z, a, b, c = (Poly.var(n) for n in "xyzabc")

RELS = ("<", "<=", "=", "!=", ">", ">=")


def rat(rng: random.Random, lo=-5, hi=5, den=4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def random_linear_block(rng: random.Random, nvars=3, natoms=6, weak_strict_mix=True) -> ExistsBlock:
    names = ["x", "y", "z"][:rng.randint(1, nvars)]
    atoms = []
    for _ in range(rng.randint(1, natoms)):
        p = Poly.const(rng.randint(-5, 5))
        for n in names:
            if rng.random() < 0.7:
                p = p + rng.randint(-5, 5) * Poly.var(n)
        atoms.append(Atom(p, rng.choice(RELS)))
    return ExistsBlock(tuple(names), _random_shape(rng, atoms))


def _random_shape(rng, atoms):
    if len(atoms) == 1:
        return atoms[0]
    if rng.random() < 0.6:
        return mk_and(atoms)
    k = rng.randint(1, len(atoms) - 1)
    left, right = atoms[:k], atoms[k:]
    return mk_or([mk_and(left), mk_and(right)]) if rng.random() < 0.5 else \
        mk_and([mk_or(left), mk_and(right)])


def random_univariate_block(rng: random.Random, max_deg=2, natoms=3, even=False) -> ExistsBlock:
    atoms = []
    step = 2 if even else 1
    for _ in range(rng.randint(1, natoms)):
        deg = rng.randint(1, max_deg) if not even else rng.choice([2, 4])
        p = Poly.const(rng.randint(-5, 5))
        for e in range(step, deg + 1, step):
            p = p + rng.randint(-5, 5) * x ** e
        if p.is_constant():
            p = p + x ** (step * 1)
        atoms.append(Atom(p, rng.choice(RELS)))
    return ExistsBlock(("x",), _random_shape(rng, atoms))


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        ok, title, detail = mod.RESULTS[k]
        line = f"[{'PASS' if ok else 'FAIL'}] {k:2d}. {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)

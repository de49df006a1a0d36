"""Print the running examples: parametric EQRs, traces and standard answers."""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from realqe.answers import solve
from realqe.formula import TRUE, fix_parameters, parse, to_infix
from realqe.qe import back_substitute, eliminate, qe
from realqe.realalg import approx_decimal

EXAMPLES = {
    "quadratic": "(exists (x y) (and (<= (+ (* a y) (* 3 (^ x 2)) (* 4 x)) a) (>= x a) (>= a y)))",
    "strict": "(exists (x y) (and (< (+ (* a y) (* 3 x x) (* 4 x)) 0) (> x y) (> y a)))",
    "unbounded": "(exists (x a) (< x a))",
    "quartic": "(exists (x) (and (= (- (* x x x x) (* 5 x x)) -4) (> (* x x) 2)))",
}


@dataclass
class ShowConfig:
    digits: int = 8
    trace: bool = False
    fixes: dict[str, dict[str, Fraction]] = field(default_factory=lambda: {
        "quadratic": {"a": Fraction(-1, 2)},
        "strict": {"a": Fraction(-2)},
        "unbounded": {"x": Fraction(2)},
        "quartic": {},
    })


def show(name: str, text: str, cfg: ShowConfig) -> None:
    blk = parse(text)
    print(f"== {name}: {text}")
    if blk.parameters:
        print("qe:", to_infix(qe(blk)))
        for r in back_substitute(eliminate(blk)).rows:
            ans = ", ".join(f"{v} = {e}" for v, e in r.answers.items())
            print(f"  {to_infix(r.condition)} | {ans}")
    fix = cfg.fixes.get(name, {})
    if cfg.trace:
        for r in eliminate(fix_parameters(blk, fix)).rows:
            if r.condition != TRUE:
                continue
            for e in r.entries:
                print(f"  {e.var} := {e.point}   [{to_infix(e.guard)}]")
            for k, phi in enumerate(r.trace):
                print(f"  phi_{k}: {to_infix(phi)}")
            break
    (row,) = solve(blk, fix)
    shown = ", ".join(f"{k} = {v}" for k, v in fix.items())
    print(f"standard answers{' at ' + shown if shown else ''}:")
    for v, a in row.answers.items():
        exact = a.rational if a.rational is not None else a.expr
        print(f"  {v} = {exact}  ~ {approx_decimal(a.value, cfg.digits)}")
    print()


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=list(EXAMPLES))
    ap.add_argument("--digits", type=int, default=8)
    ap.add_argument("--trace", action="store_true")
    ns = ap.parse_args(argv)
    cfg = ShowConfig(digits=ns.digits, trace=ns.trace)
    for n in ns.names:
        show(n, EXAMPLES[n], cfg)


if __name__ == "__main__":
    main()

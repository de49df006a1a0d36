"""Command-line front end: ``realqe {qe,eqr,stdans,check} FILE``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .arith import DegreeTooHigh
from .formula import (
    FALSE, TRUE, ExistsBlock, ParseError, fix_parameters, parse, to_infix, to_text,
)
from .answers import (
    AllRowsFalse, AnswerConfig, InvariantViolation, MalformedPoint,
    PreconditionParametric, solve,
)
from .oracle import check_satisfaction
from .qe import back_substitute, eliminate, qe
from .realalg import AlgebraicError, RealAlgebraicNumber, approx_decimal, ran_from_root

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_KERNEL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path: str) -> ExistsBlock:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(str(e)) from e
    f = parse(text)
    if not isinstance(f, ExistsBlock):
        f = ExistsBlock((), f)
    return f


def _parse_fix(items: Sequence[str]) -> dict[str, Fraction]:
    out = {}
    for item in items or ():
        name, sep, val = item.partition("=")
        if not sep or not name:
            raise UsageError(f"bad --fix {item!r}; expected VAR=RATIONAL")
        try:
            out[name.strip()] = Fraction(val.strip())
        except ValueError as e:
            raise UsageError(f"bad rational in --fix {item!r}") from e
    return out


def _value_json(x, digits: int) -> dict:
    if isinstance(x, Fraction):
        x = RealAlgebraicNumber.from_rational(x)
    q = x.rational_value()
    if q is not None:
        return {"exact": str(q), "approx": approx_decimal(x, digits)}
    return {
        "exact": str(x),
        "defining": [str(c) for c in x.defining],
        "interval": [str(x.lo), str(x.hi)],
        "approx": approx_decimal(x, digits),
    }


def _value_from_json(v):
    if isinstance(v, (int, float)):
        return Fraction(str(v))
    if isinstance(v, str):
        return Fraction(v)
    if "defining" in v:
        poly = tuple(Fraction(c) for c in v["defining"])
        lo, hi = v["interval"]
        return ran_from_root(poly, (Fraction(lo), Fraction(hi)))
    return Fraction(v["exact"])


def _dump_trace(pre, out) -> None:
    for i, row in enumerate(pre.rows):
        print(f"row {i + 1}: {to_infix(row.condition)}", file=out)
        for e in row.entries:
            print(f"  {e.var} := {e.point}   guard: {to_infix(e.guard)}", file=out)
        for k, phi in enumerate(row.trace):
            print(f"  phi_{k}: {to_infix(phi)}", file=out)


def cmd_qe(args, out) -> int:
    block = fix_parameters(_load(args.file), _parse_fix(args.fix))
    res = qe(block)
    if args.json:
        json.dump({"result": to_text(res)}, out)
        out.write("\n")
    else:
        print(to_text(res) if args.sexpr else to_infix(res), file=out)
    return EXIT_FALSE if res == FALSE else EXIT_TRUE


def cmd_eqr(args, out) -> int:
    block = fix_parameters(_load(args.file), _parse_fix(args.fix))
    pre = eliminate(block)
    if args.trace:
        _dump_trace(pre, sys.stderr)
    eqr = back_substitute(pre)
    if args.json:
        rows = [{"condition": to_text(r.condition),
                 "answers": {v: str(e) for v, e in r.answers.items()}} for r in eqr.rows]
        json.dump({"result": "false" if not rows else "eqr", "rows": rows}, out, indent=1)
        out.write("\n")
    else:
        for r in eqr.rows:
            ans = ", ".join(f"{v} = {e}" for v, e in r.answers.items())
            print(f"{to_infix(r.condition)} | {ans}", file=out)
    return EXIT_TRUE if eqr.rows else EXIT_FALSE


def cmd_stdans(args, out) -> int:
    fixed = _parse_fix(args.fix)
    block = _load(args.file)
    if args.trace:
        _dump_trace(eliminate(fix_parameters(block, fixed)), sys.stderr)
    try:
        rows = solve(block, fixed, all_rows=args.all_rows, nudge=args.nudge,
                     cfg=AnswerConfig(scan_cap=args.scan_cap))
    except AllRowsFalse:
        if args.json:
            json.dump({"result": "false", "rows": []}, out)
            out.write("\n")
        else:
            print("false", file=out)
        return EXIT_FALSE
    given = {v: q for v, q in fixed.items() if v in block.quantified or v in block.parameters}
    if args.json:
        data = {"result": "true", "rows": []}
        for r in rows:
            answers = {v: _value_json(a.value, args.digits) for v, a in r.answers.items()}
            answers.update({v: _value_json(q, args.digits) for v, q in given.items()})
            data["rows"].append({"condition": to_text(r.condition), "answers": answers})
        json.dump(data, out, indent=1)
        out.write("\n")
        return EXIT_TRUE
    for r in rows:
        parts = []
        for v, a in r.answers.items():
            if a.rational is not None:
                parts.append(f"{v} = {a.rational}")
            else:
                parts.append(f"{v} = {a.value} ~ {approx_decimal(a.value, args.digits)}")
        print(f"{to_infix(r.condition)} | {', '.join(parts)}", file=out)
    return EXIT_TRUE


def cmd_check(args, out) -> int:
    block = _load(args.file)
    try:
        with open(args.answers) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read answers: {e}") from e
    if isinstance(data, dict) and "rows" in data:
        assignments = [r["answers"] for r in data["rows"]]
    elif isinstance(data, dict):
        assignments = [data]
    else:
        raise UsageError("answers file must be a JSON object")
    if not assignments:
        print("no assignments to check", file=out)
        return EXIT_FALSE
    ok = True
    for i, amap in enumerate(assignments):
        point = {v: _value_from_json(x) for v, x in amap.items()}
        try:
            good = check_satisfaction(block.matrix, point)
        except KeyError as e:
            raise UsageError(str(e)) from e
        print(f"assignment {i + 1}: {'satisfies' if good else 'violates'} the matrix", file=out)
        ok = ok and good
    return EXIT_TRUE if ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="realqe",
                                 description="Extended real quantifier elimination by virtual substitution")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, fix=True):
        p.add_argument("file")
        if fix:
            p.add_argument("--fix", action="append", default=[], metavar="VAR=RAT",
                           help="fix a free or quantified variable to a rational")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("qe", help="quantifier-free equivalent")
    common(p)
    p.add_argument("--sexpr", action="store_true", help="print in input syntax")
    p.set_defaults(func=cmd_qe)

    p = sub.add_parser("eqr", help="extended QE result with eps/inf answers")
    common(p)
    p.add_argument("--trace", action="store_true", help="dump the pre-EQR to stderr")
    p.set_defaults(func=cmd_eqr)

    p = sub.add_parser("stdans", help="standard answers for a closed formula")
    common(p)
    p.add_argument("--all-rows", action="store_true")
    p.add_argument("--digits", type=int, default=10)
    p.add_argument("--nudge", action="store_true", help="try e-eps / e+eps for root answers")
    p.add_argument("--scan-cap", type=int, default=64)
    p.add_argument("--trace", action="store_true", help="dump the pre-EQR to stderr")
    p.set_defaults(func=cmd_stdans)

    p = sub.add_parser("check", help="verify an answer file against a formula")
    common(p, fix=False)
    p.add_argument("--answers", required=True)
    p.set_defaults(func=cmd_check)
    return ap


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_TRUE
    if getattr(args, "digits", 1) < 1:
        print("error: --digits must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except (UsageError, ParseError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionParametric as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_KERNEL
    except (DegreeTooHigh, InvariantViolation, MalformedPoint, AlgebraicError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_KERNEL


def main() -> None:
    sys.exit(run())

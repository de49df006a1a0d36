"""Compare the elimination kernel with the reference oracles on random corpora.

    python3 scripts/oracle_sweep.py --linear 500 --univariate 300 --seed 1
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from conftest import random_linear_block, random_univariate_block  # noqa: E402

from realqe.answers import solve  # noqa: E402
from realqe.formula import to_text  # noqa: E402
from realqe.oracle import check_satisfaction, fourier_motzkin_decide, univariate_sample_decide  # noqa: E402
from realqe.qe import decide  # noqa: E402


@dataclass
class SweepConfig:
    linear: int = 500
    univariate: int = 300
    shifted: int = 100
    seed: int = 1
    check_answers: bool = True
    verbose: bool = False


@dataclass
class SweepStats:
    name: str
    total: int = 0
    true: int = 0
    mismatches: int = 0
    bad_answers: int = 0
    seconds: float = 0.0

    def line(self) -> str:
        return (f"{self.name:11s} n={self.total:4d} true={self.true:4d} "
                f"mismatch={self.mismatches} bad_answers={self.bad_answers} "
                f"time={self.seconds:.2f}s")


def sweep(name, blocks, oracle, cfg: SweepConfig) -> SweepStats:
    st = SweepStats(name)
    t0 = time.perf_counter()
    for blk in blocks:
        st.total += 1
        got, ref = decide(blk), oracle(blk)
        if got != ref:
            st.mismatches += 1
            print(f"MISMATCH {to_text(blk)}: kernel={got} oracle={ref}")
            continue
        if not got:
            continue
        st.true += 1
        if cfg.check_answers:
            (row,) = solve(blk)
            pt = {v: a.value for v, a in row.answers.items()}
            if not check_satisfaction(blk.matrix, pt):
                st.bad_answers += 1
                print(f"BAD ANSWER {to_text(blk)}: {pt}")
            elif cfg.verbose:
                print(to_text(blk), {v: str(a.expr) for v, a in row.answers.items()})
    st.seconds = time.perf_counter() - t0
    return st


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--linear", type=int, default=SweepConfig.linear)
    ap.add_argument("--univariate", type=int, default=SweepConfig.univariate)
    ap.add_argument("--shifted", type=int, default=SweepConfig.shifted)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--no-answers", action="store_true")
    ap.add_argument("-v", "--verbose", action="store_true")
    ns = ap.parse_args(argv)
    cfg = SweepConfig(ns.linear, ns.univariate, ns.shifted, ns.seed, not ns.no_answers, ns.verbose)

    rng = random.Random(cfg.seed)
    results = [
        sweep("linear", [random_linear_block(rng) for _ in range(cfg.linear)],
              fourier_motzkin_decide, cfg),
        sweep("univariate", [random_univariate_block(rng) for _ in range(cfg.univariate)],
              univariate_sample_decide, cfg),
        sweep("shifted", [random_univariate_block(rng, even=True) for _ in range(cfg.shifted)],
              univariate_sample_decide, cfg),
    ]
    for st in results:
        print(st.line())
    return 1 if any(s.mismatches or s.bad_answers for s in results) else 0


if __name__ == "__main__":
    sys.exit(main())

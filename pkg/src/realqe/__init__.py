"""Extended real quantifier elimination by virtual substitution, with standard answers."""
from .arith import DegreeTooHigh, Poly
from .formula import ExistsBlock, fix_parameters, parse, simplify, to_infix, to_text
from .realalg import RAN, RealAlgebraicNumber
from .qe import back_substitute, decide, eliminate, qe
from .answers import (
    AllRowsFalse, PreconditionParametric, eps_nudge, pick_row, solve, standard_answers,
)
from .oracle import check_satisfaction, fourier_motzkin_decide, univariate_sample_decide

__version__ = "0.1.0"

__all__ = [
    "DegreeTooHigh", "Poly", "ExistsBlock", "fix_parameters", "parse", "simplify",
    "to_infix", "to_text", "RAN", "RealAlgebraicNumber", "back_substitute", "decide",
    "eliminate", "qe", "AllRowsFalse", "PreconditionParametric", "eps_nudge", "pick_row",
    "solve", "standard_answers", "check_satisfaction", "fourier_motzkin_decide",
    "univariate_sample_decide",
]

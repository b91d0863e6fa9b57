"""Exact angular momentum coupling: Clebsch-Gordan, 3-j, 6-j and Racah W."""

from fractions import Fraction

from .closed_forms import NoClosedForm, closed_form_by_pattern, match_pattern, sixj_closed_form
from .factorials import FactorialCapError, FactorialTable, factorials
from .numbers import HalfInt, SpinLike, SqrtRational, half, is_perfect_square, phase, triangle
from .oracle import wigner_6j_oracle
from .symbols import clebsch_gordan, racah_w, sixj_symmetric_forms, wigner_3j, wigner_6j

Rational = Fraction

__all__ = [
    "FactorialCapError",
    "FactorialTable",
    "Fraction",
    "HalfInt",
    "NoClosedForm",
    "Rational",
    "SpinLike",
    "SqrtRational",
    "clebsch_gordan",
    "closed_form_by_pattern",
    "factorials",
    "half",
    "is_perfect_square",
    "match_pattern",
    "phase",
    "racah_w",
    "sixj_closed_form",
    "sixj_symmetric_forms",
    "triangle",
    "wigner_3j",
    "wigner_6j",
    "wigner_6j_oracle",
]

"""Closed-form 6-j symbols with one argument equal to 1/2 or 1.

Six special cases are supported, written with ``J = j1 + j2 + j``::

    half_a   {j1-1/2  1/2  j1 ; j2    j  j2-1/2}
    half_b   {j1-1/2  1/2  j1 ; j2-1/2 j  j2   }
    one_a    {j1-1    1    j1 ; j2    j  j2-1  }
    one_b    {j1-1    1    j1 ; j2-1  j  j2    }
    one_c    {j1      1    j1 ; j2-1  j  j2    }
    one_d    {j1      1    j1 ; j2    j  j2    }

An arbitrary 6-j is first brought into one of these shapes with the
column-permutation and row-exchange symmetries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, NamedTuple

from .numbers import SpinLike, SqrtRational, half, phase, triangle
from .symbols import sixj_symmetric_forms

__all__ = ["NoClosedForm", "PATTERNS", "closed_form_by_pattern", "match_pattern", "sixj_closed_form"]


class NoClosedForm(LookupError):
    """The 6-j arguments match none of the closed-form patterns."""


class _Pattern(NamedTuple):
    shape: Callable[[int, int, int], tuple[int, ...]]
    value: Callable[[Fraction, Fraction, Fraction, int], SqrtRational]


def _root(two_sign: int, radicand: Fraction) -> SqrtRational:
    if radicand < 0:
        raise ArithmeticError(f"negative radicand {radicand} in closed-form 6-j")
    return SqrtRational(phase(two_sign), radicand)


def _half_a(j1, j2, j, twoJ):
    J = j1 + j2 + j
    return _root(twoJ, (J + 1) * (J - 2 * j) / (2 * j1 * (2 * j1 + 1) * 2 * j2 * (2 * j2 + 1)))


def _half_b(j1, j2, j, twoJ):
    J = j1 + j2 + j
    h = Fraction(1, 2)
    return _root(
        twoJ - 1,
        (J - 2 * j1 + h) * (J - 2 * j2 + h) / (2 * j1 * (2 * j1 + 1) * 2 * j2 * (2 * j2 + 1)),
    )


def _den_one(j1, j2):
    return (2 * j1 - 1) * 2 * j1 * (2 * j1 + 1) * (2 * j2 - 1) * 2 * j2 * (2 * j2 + 1)


def _one_a(j1, j2, j, twoJ):
    J = j1 + j2 + j
    return _root(twoJ, J * (J + 1) * (J - 2 * j - 1) * (J - 2 * j) / _den_one(j1, j2))


def _one_b(j1, j2, j, twoJ):
    J = j1 + j2 + j
    return _root(
        twoJ - 2,
        (J - 2 * j1) * (J - 2 * j1 + 1) * (J - 2 * j2) * (J - 2 * j2 + 1) / _den_one(j1, j2),
    )


def _one_c(j1, j2, j, twoJ):
    J = j1 + j2 + j
    return _root(
        twoJ,
        2 * (J + 1) * (J - 2 * j) * (J - 2 * j1) * (J - 2 * j2 + 1)
        / (2 * j1 * (2 * j1 + 1) * (2 * j1 + 2) * (2 * j2 - 1) * 2 * j2 * (2 * j2 + 1)),
    )


def _one_d(j1, j2, j, twoJ):
    num = j * (j + 1) - j1 * (j1 + 1) - j2 * (j2 + 1)
    den = j1 * (2 * j1 + 1) * (2 * j1 + 2) * j2 * (2 * j2 + 1) * (2 * j2 + 2)
    value = SqrtRational.from_rational(num) / SqrtRational(1, den)
    return value * phase(twoJ)


# shapes take doubled (j1, j2, j) and return the doubled 6-j arguments
PATTERNS: dict[str, _Pattern] = {
    "half_a": _Pattern(lambda a, b, c: (a - 1, 1, a, b, c, b - 1), _half_a),
    "half_b": _Pattern(lambda a, b, c: (a - 1, 1, a, b - 1, c, b), _half_b),
    "one_a": _Pattern(lambda a, b, c: (a - 2, 2, a, b, c, b - 2), _one_a),
    "one_b": _Pattern(lambda a, b, c: (a - 2, 2, a, b - 2, c, b), _one_b),
    "one_c": _Pattern(lambda a, b, c: (a, 2, a, b - 2, c, b), _one_c),
    "one_d": _Pattern(lambda a, b, c: (a, 2, a, b, c, b), _one_d),
}


def closed_form_by_pattern(name: str, j1: SpinLike, j2: SpinLike, j: SpinLike) -> SqrtRational:
    """Evaluate pattern ``name`` at parameters ``(j1, j2, j)``."""
    try:
        pattern = PATTERNS[name]
    except KeyError:
        raise ValueError(f"unknown closed-form pattern {name!r}") from None
    t1, t2, t = (half(x).two_j for x in (j1, j2, j))
    args = pattern.shape(t1, t2, t)
    if not _valid(args):
        return SqrtRational(0)
    return pattern.value(Fraction(t1, 2), Fraction(t2, 2), Fraction(t, 2), t1 + t2 + t)


def _valid(args: tuple[int, ...]) -> bool:
    a, b, c, d, e, f = args
    return all(triangle(*t) for t in ((a, b, c), (a, e, f), (d, b, f), (d, e, c)))


def match_pattern(*args: SpinLike) -> tuple[str, tuple[int, int, int]]:
    """Find a pattern and doubled parameters ``(j1, j2, j)`` reproducing ``args``."""
    doubled = tuple(half(x).two_j for x in args)
    for form in sixj_symmetric_forms(doubled):
        A, B, C, D, E, F = form
        for name, pattern in PATTERNS.items():
            # j1 is always the third column top, j the middle bottom
            for t2 in (D, F):
                params = (C, t2, E)
                if pattern.shape(*params) == form:
                    return name, params
    raise NoClosedForm(f"no closed form for 6-j {{{' '.join(map(str, args))}}}")


def sixj_closed_form(*args: SpinLike) -> SqrtRational:
    """Closed-form value of ``{a b c; d e f}``; raises :class:`NoClosedForm` if none applies."""
    doubled = tuple(half(x).two_j for x in args)
    if len(doubled) != 6:
        raise TypeError("a 6-j symbol takes six arguments")
    if not _valid(doubled):
        return SqrtRational(0)
    name, (t1, t2, t) = match_pattern(*args)
    return PATTERNS[name].value(Fraction(t1, 2), Fraction(t2, 2), Fraction(t, 2), t1 + t2 + t)

"""Clebsch-Gordan coefficients and Wigner 3-j / 6-j symbols in exact arithmetic.

All values are computed with the Racah single-sum formulas and returned as
:class:`SqrtRational`.  Phases follow the Condon-Shortley convention.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .factorials import factorials
from .numbers import HalfInt, SpinLike, SqrtRational, half, phase, triangle

__all__ = [
    "clebsch_gordan",
    "wigner_3j",
    "wigner_6j",
    "racah_w",
    "sixj_symmetric_forms",
    "check_pair",
]

ZERO = SqrtRational(0)


def check_pair(j: HalfInt, m: HalfInt) -> None:
    """Raise ``ValueError`` unless ``(j, m)`` labels a state of a spin-j multiplet."""
    if j.two_j < 0:
        raise ValueError(f"negative spin {j}")
    if (j.two_j - m.two_j) % 2:
        raise ValueError(f"parity mismatch: j={j}, m={m} (j - m must be an integer)")
    if abs(m.two_j) > j.two_j:
        raise ValueError(f"|m| > j: j={j}, m={m}")


def clebsch_gordan(
    j1: SpinLike, m1: SpinLike, j2: SpinLike, m2: SpinLike, J: SpinLike, M: SpinLike
) -> SqrtRational:
    """Return ``<j1 m1; j2 m2 | J M>`` exactly.

    Zero when ``M != m1 + m2`` or the triangle rule fails.

    >>> str(clebsch_gordan("1/2", "1/2", "1/2", "-1/2", 0, 0))
    '1*sqrt(1/2)'
    """
    j1, m1, j2, m2, J, M = (half(x) for x in (j1, m1, j2, m2, J, M))
    for j, m in ((j1, m1), (j2, m2), (J, M)):
        check_pair(j, m)
    return _cg(j1.two_j, m1.two_j, j2.two_j, m2.two_j, J.two_j, M.two_j)


@lru_cache(maxsize=1 << 16)
def _cg(tj1: int, tm1: int, tj2: int, tm2: int, tJ: int, tM: int) -> SqrtRational:
    if tM != tm1 + tm2 or not triangle(tj1, tj2, tJ):
        return ZERO
    f = factorials
    # integer-valued arguments of the Racah formula
    a = (tj1 + tj2 - tJ) // 2
    b = (tj1 - tm1) // 2
    c = (tj2 + tm2) // 2
    d = (tJ - tj2 + tm1) // 2
    e = (tJ - tj1 - tm2) // 2
    pre = Fraction(
        (tJ + 1)
        * f((tJ + tj1 - tj2) // 2)
        * f((tJ - tj1 + tj2) // 2)
        * f(a)
        * f((tJ + tM) // 2)
        * f((tJ - tM) // 2)
        * f(b)
        * f((tj1 + tm1) // 2)
        * f((tj2 - tm2) // 2)
        * f(c),
        f((tj1 + tj2 + tJ) // 2 + 1),
    )
    total = Fraction(0)
    for k in range(max(0, -d, -e), min(a, b, c) + 1):
        den = f(k) * f(a - k) * f(b - k) * f(c - k) * f(d + k) * f(e + k)
        total += Fraction(-1 if k % 2 else 1, den)
    return _scaled(pre, total)


def _scaled(pre: Fraction, total: Fraction) -> SqrtRational:
    """``sqrt(pre) * total`` as a SqrtRational."""
    if total == 0:
        return ZERO
    return SqrtRational(1 if total > 0 else -1, pre * total * total)


def wigner_3j(
    j1: SpinLike, j2: SpinLike, j3: SpinLike, m1: SpinLike, m2: SpinLike, m3: SpinLike
) -> SqrtRational:
    """Wigner 3-j symbol from the Clebsch-Gordan coefficient.

    Uses ``<j1 m1; j2 m2 | J M> = (-1)^(j1-j2+M) sqrt(2J+1) (j1 j2 J; m1 m2 -M)``.
    """
    j1, j2, j3, m1, m2, m3 = (half(x) for x in (j1, j2, j3, m1, m2, m3))
    for j, m in ((j1, m1), (j2, m2), (j3, m3)):
        check_pair(j, m)
    if m1.two_j + m2.two_j + m3.two_j != 0:
        return ZERO
    cg = _cg(j1.two_j, m1.two_j, j2.two_j, m2.two_j, j3.two_j, -m3.two_j)
    if not cg:
        return ZERO
    sign = phase(j1.two_j - j2.two_j - m3.two_j)
    return SqrtRational(sign * cg.sign, cg.radicand / (j3.two_j + 1))


def sixj_symmetric_forms(args: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All 24 argument tuples equal to ``{a b c; d e f}`` by tetrahedral symmetry.

    Columns may be permuted, and the upper and lower entries of any two
    columns may be exchanged.
    """
    a, b, c, d, e, f = args
    cols = ((a, d), (b, e), (c, f))
    forms = []
    for p in permutations(cols):
        for flips in ((0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)):
            top = []
            bottom = []
            for (u, v), fl in zip(p, flips):
                if fl:
                    u, v = v, u
                top.append(u)
                bottom.append(v)
            forms.append((*top, *bottom))
    return forms


def wigner_6j(
    a: SpinLike, b: SpinLike, c: SpinLike, d: SpinLike, e: SpinLike, f: SpinLike
) -> SqrtRational:
    """Wigner 6-j symbol ``{a b c; d e f}`` via the Racah single sum."""
    args = tuple(half(x).two_j for x in (a, b, c, d, e, f))
    if any(x < 0 for x in args):
        raise ValueError(f"negative spin in 6-j arguments {args}")
    return _sixj_canonical(min(sixj_symmetric_forms(args)))


def _delta_sq(x: int, y: int, z: int) -> Fraction:
    f = factorials
    return Fraction(
        f((x + y - z) // 2) * f((x - y + z) // 2) * f((-x + y + z) // 2),
        f((x + y + z) // 2 + 1),
    )


@lru_cache(maxsize=1 << 16)
def _sixj_canonical(args: tuple[int, ...]) -> SqrtRational:
    a, b, c, d, e, f = args
    triads = ((a, b, c), (a, e, f), (d, b, f), (d, e, c))
    if not all(triangle(*t) for t in triads):
        return ZERO
    fact = factorials
    pre = Fraction(1)
    for t in triads:
        pre *= _delta_sq(*t)
    s1, s2, s3, s4 = (sum(t) // 2 for t in triads)
    p1 = (a + b + d + e) // 2
    p2 = (b + c + e + f) // 2
    p3 = (c + a + f + d) // 2
    total = Fraction(0)
    for z in range(max(s1, s2, s3, s4), min(p1, p2, p3) + 1):
        den = (
            fact(z - s1) * fact(z - s2) * fact(z - s3) * fact(z - s4)
            * fact(p1 - z) * fact(p2 - z) * fact(p3 - z)
        )
        total += Fraction((-1 if z % 2 else 1) * fact(z + 1), den)
    return _scaled(pre, total)


def racah_w(
    a: SpinLike, b: SpinLike, a2: SpinLike, b2: SpinLike, J: SpinLike, J2: SpinLike
) -> SqrtRational:
    """Racah coefficient ``W(a, b, a', b'; J J') = (-1)^(a+b+a'+b') {a b J; a' b' J'}``."""
    sixj = wigner_6j(a, b, J, a2, b2, J2)
    if not sixj:
        return ZERO
    two_alpha = sum(half(x).two_j for x in (a, b, a2, b2))
    return sixj * phase(two_alpha)

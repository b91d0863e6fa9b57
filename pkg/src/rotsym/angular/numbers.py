"""Exact number types for angular momentum algebra.

``HalfInt`` stores a spin or magnetic quantum number as a doubled integer, so
``3/2`` is ``HalfInt(3)``.  ``SqrtRational`` holds values of the form
``sign * sqrt(p/q)``, which is the closure of the Racah single-sum formulas.
Plain rationals are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

__all__ = [
    "HalfInt",
    "SpinLike",
    "SqrtRational",
    "half",
    "phase",
    "is_perfect_square",
    "triangle",
]


@dataclass(frozen=True, order=True)
class HalfInt:
    """A value ``two_j / 2`` with ``two_j`` an integer."""

    two_j: int

    def __post_init__(self) -> None:
        if not isinstance(self.two_j, int) or isinstance(self.two_j, bool):
            raise TypeError(f"two_j must be an int, got {self.two_j!r}")

    @classmethod
    def parse(cls, text: str) -> "HalfInt":
        """Parse ``"3/2"``, ``"-1/2"``, ``"2"`` or ``"1.5"``."""
        s = text.strip()
        if "/" in s:
            num, _, den = s.partition("/")
            try:
                n, d = int(num), int(den)
            except ValueError:
                raise ValueError(f"not a half-integer: {text!r}") from None
            if d == 2:
                return cls(n)
            if d == 1:
                return cls(2 * n)
            raise ValueError(f"not a half-integer: {text!r}")
        try:
            return cls.from_value(Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a half-integer: {text!r}") from None

    @classmethod
    def from_value(cls, value: "SpinLike") -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, bool):
            raise TypeError("bool is not a spin value")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"not a half-integer: {value!r}")
            value = Fraction(value)
        if isinstance(value, _RationalABC):
            doubled = Fraction(value) * 2
            if doubled.denominator != 1:
                raise ValueError(f"not a half-integer: {value!r}")
            return cls(int(doubled))
        raise TypeError(f"cannot interpret {value!r} as a half-integer")

    @property
    def value(self) -> Fraction:
        return Fraction(self.two_j, 2)

    @property
    def is_integer(self) -> bool:
        return self.two_j % 2 == 0

    @property
    def dim(self) -> int:
        """Multiplet dimension ``2j + 1``."""
        if self.two_j < 0:
            raise ValueError("dimension of a negative spin")
        return self.two_j + 1

    def magnetic_values(self) -> list["HalfInt"]:
        """``m = j, j-1, ..., -j`` (descending, the basis order used throughout)."""
        return [HalfInt(self.two_j - 2 * k) for k in range(self.two_j + 1)]

    def __add__(self, other: "SpinLike") -> "HalfInt":
        return HalfInt(self.two_j + half(other).two_j)

    __radd__ = __add__

    def __sub__(self, other: "SpinLike") -> "HalfInt":
        return HalfInt(self.two_j - half(other).two_j)

    def __rsub__(self, other: "SpinLike") -> "HalfInt":
        return HalfInt(half(other).two_j - self.two_j)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.two_j)

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.two_j))

    def __float__(self) -> float:
        return self.two_j / 2

    def __str__(self) -> str:
        if self.two_j % 2 == 0:
            return str(self.two_j // 2)
        return f"{self.two_j}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"


SpinLike = Union[HalfInt, int, float, str, Fraction]


def half(value: SpinLike) -> HalfInt:
    """Coerce ``value`` to a :class:`HalfInt`."""
    return HalfInt.from_value(value)


def phase(two_x: int) -> int:
    """Return ``(-1)**x`` for ``x = two_x / 2``; ``x`` must be an integer."""
    if two_x % 2:
        raise ValueError(f"phase (-1)^({two_x}/2) is not real")
    return -1 if (two_x // 2) % 2 else 1


def triangle(two_a: int, two_b: int, two_c: int) -> bool:
    """Triangle rule on doubled spins: ``|a-b| <= c <= a+b`` and ``a+b+c`` integer."""
    if two_a < 0 or two_b < 0 or two_c < 0:
        return False
    if (two_a + two_b + two_c) % 2:
        return False
    return abs(two_a - two_b) <= two_c <= two_a + two_b


def is_perfect_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


class SqrtRational:
    """Exact value ``sign * sqrt(radicand)`` with a rational radicand.

    The radicand is kept as a reduced :class:`~fractions.Fraction`; square
    factors are not pulled out, so equality is a comparison of sign and
    radicand.
    """

    __slots__ = ("_sign", "_radicand")

    def __init__(self, sign: int, radicand: Fraction | int = 0) -> None:
        radicand = Fraction(radicand)
        if radicand < 0:
            raise ValueError("radicand must be non-negative")
        if sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {sign!r}")
        if radicand == 0 or sign == 0:
            sign, radicand = 0, Fraction(0)
        self._sign = sign
        self._radicand = radicand

    @property
    def sign(self) -> int:
        return self._sign

    @property
    def radicand(self) -> Fraction:
        return self._radicand

    @classmethod
    def from_rational(cls, q: Fraction | int) -> "SqrtRational":
        q = Fraction(q)
        return cls((q > 0) - (q < 0), q * q)

    @classmethod
    def sqrt(cls, radicand: Fraction | int, sign: int = 1) -> "SqrtRational":
        return cls(sign, radicand)

    def square(self) -> Fraction:
        return self._radicand

    def is_zero(self) -> bool:
        return self._sign == 0

    def is_rational(self) -> bool:
        return is_perfect_square(self._radicand)

    def to_rational(self) -> Fraction:
        """Demote to a Fraction; raises ``ValueError`` if the radicand is not a square."""
        r = self._radicand
        n, d = math.isqrt(r.numerator), math.isqrt(r.denominator)
        if n * n != r.numerator or d * d != r.denominator:
            raise ValueError(f"{self} is not rational")
        return self._sign * Fraction(n, d)

    def __mul__(self, other: object) -> "SqrtRational":
        if isinstance(other, SqrtRational):
            return SqrtRational(self._sign * other._sign, self._radicand * other._radicand)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * SqrtRational.from_rational(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "SqrtRational":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            other = SqrtRational.from_rational(other)
        if not isinstance(other, SqrtRational):
            return NotImplemented
        if other._sign == 0:
            raise ZeroDivisionError("division by zero SqrtRational")
        return SqrtRational(self._sign * other._sign, self._radicand / other._radicand)

    def __neg__(self) -> "SqrtRational":
        return SqrtRational(-self._sign, self._radicand)

    def __abs__(self) -> "SqrtRational":
        return SqrtRational(abs(self._sign), self._radicand)

    def __float__(self) -> float:
        r = self._radicand
        return self._sign * math.sqrt(r.numerator / r.denominator) if r else 0.0

    def __bool__(self) -> bool:
        return self._sign != 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SqrtRational):
            return self._sign == other._sign and self._radicand == other._radicand
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == SqrtRational.from_rational(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self._sign, self._radicand))

    def __repr__(self) -> str:
        return f"SqrtRational({self._sign}, {self._radicand})"

    def __str__(self) -> str:
        if self._sign == 0:
            return "0"
        return f"{self._sign}*sqrt({_fmt_fraction(self._radicand)})"

    _PATTERN = re.compile(r"^\s*([+-]?[01])\s*\*\s*sqrt\(\s*([^)]+?)\s*\)\s*$")

    @classmethod
    def parse(cls, text: str) -> "SqrtRational":
        """Inverse of ``str``: ``"-1*sqrt(3/4)"`` or ``"0"``."""
        m = cls._PATTERN.match(text)
        if m is None:
            if text.strip() in ("0", "+0", "-0"):
                return cls(0)
            raise ValueError(f"not a SqrtRational string: {text!r}")
        sign = int(m.group(1))
        try:
            radicand = Fraction(m.group(2))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a SqrtRational string: {text!r}") from None
        if radicand < 0 or (sign == 0) != (radicand == 0):
            raise ValueError(f"inconsistent SqrtRational string: {text!r}")
        return cls(sign, radicand)


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"

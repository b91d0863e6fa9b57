"""Spin pairs, invariant-state families and fidelity vectors."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ..angular import HalfInt, SpinLike, half

__all__ = [
    "Family",
    "FidelityVector",
    "InexactFidelityVector",
    "SpinPair",
    "snap_rational",
    "SNAP_TOL",
    "SNAP_MAX_DENOMINATOR",
]

logger = logging.getLogger(__name__)

SNAP_TOL = 1e-10
SNAP_MAX_DENOMINATOR = 10**6


class Family(enum.IntEnum):
    """Which invariant projectors span the family: ``Q`` (Werner-like) or ``P`` (isotropic-like).

    The integer value is the bit used in multipartite family masks.
    """

    WERNER = 0
    ISOTROPIC = 1

    @classmethod
    def parse(cls, value: "Family | int | str") -> "Family":
        if isinstance(value, str):
            key = value.strip().lower()
            aliases = {"werner": 0, "q": 0, "0": 0, "isotropic": 1, "p": 1, "1": 1}
            if key not in aliases:
                raise ValueError(f"unknown family {value!r}")
            return cls(aliases[key])
        return cls(int(value))

    def flipped(self) -> "Family":
        return Family(1 - self)


@dataclass(frozen=True)
class SpinPair:
    """Spins ``(j_A, j_B)`` with ``j_B >= j_A >= 0``."""

    ja: HalfInt
    jb: HalfInt

    def __post_init__(self) -> None:
        object.__setattr__(self, "ja", half(self.ja))
        object.__setattr__(self, "jb", half(self.jb))
        if self.ja.two_j < 0:
            raise ValueError(f"negative spin j_A={self.ja}")
        if self.jb.two_j < self.ja.two_j:
            raise ValueError(f"need j_B >= j_A, got j_A={self.ja}, j_B={self.jb}")

    @classmethod
    def of(cls, ja: SpinLike, jb: SpinLike) -> "SpinPair":
        return cls(half(ja), half(jb))

    @property
    def d_a(self) -> int:
        return self.ja.two_j + 1

    @property
    def d_b(self) -> int:
        return self.jb.two_j + 1

    @property
    def dim(self) -> int:
        return self.d_a * self.d_b

    @property
    def J_values(self) -> list[HalfInt]:
        """Total spins ``j_B - j_A, ..., j_B + j_A`` in ascending order."""
        lo = self.jb.two_j - self.ja.two_j
        return [HalfInt(lo + 2 * k) for k in range(self.d_a)]

    @property
    def J_max(self) -> HalfInt:
        return HalfInt(self.ja.two_j + self.jb.two_j)

    def index_of(self, J: SpinLike) -> int:
        J = half(J)
        k, r = divmod(J.two_j - (self.jb.two_j - self.ja.two_j), 2)
        if r or not 0 <= k < self.d_a:
            raise ValueError(f"J={J} is not a total spin of {self}")
        return k

    def __str__(self) -> str:
        return f"({self.ja}, {self.jb})"


def snap_rational(
    x: float, tol: float = SNAP_TOL, max_denominator: int = SNAP_MAX_DENOMINATOR
) -> Fraction | None:
    """Nearest fraction with denominator ``<= max_denominator``, if within ``tol`` of ``x``."""
    q = Fraction(x).limit_denominator(max_denominator)
    if abs(float(q) - x) <= tol:
        return q
    return None


def _as_fraction(x: object) -> Fraction:
    if isinstance(x, float):
        raise TypeError("fidelities must be exact (Fraction, int or 'p/q' string), not float")
    return Fraction(x)  # type: ignore[arg-type]


@dataclass(frozen=True)
class FidelityVector:
    """Exact fidelities ``q_J`` (or ``p_J``) of an invariant bipartite state.

    ``values[k]`` belongs to ``pair.J_values[k]``; entries are non-negative and
    sum to exactly one.
    """

    pair: SpinPair
    family: Family
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        values = tuple(_as_fraction(v) for v in self.values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "family", Family.parse(self.family))
        if len(values) != self.pair.d_a:
            raise ValueError(f"expected {self.pair.d_a} fidelities for {self.pair}, got {len(values)}")
        if any(v < 0 for v in values):
            raise ValueError(f"negative fidelity in {[str(v) for v in values]}")
        if sum(values) != 1:
            raise ValueError(f"fidelities sum to {sum(values)}, not 1")

    @classmethod
    def delta(cls, pair: SpinPair, J: SpinLike, family: Family = Family.WERNER) -> "FidelityVector":
        values = [Fraction(0)] * pair.d_a
        values[pair.index_of(J)] = Fraction(1)
        return cls(pair, family, tuple(values))

    @classmethod
    def uniform(cls, pair: SpinPair, family: Family = Family.WERNER) -> "FidelityVector":
        return cls(pair, family, (Fraction(1, pair.d_a),) * pair.d_a)

    def __getitem__(self, J: SpinLike) -> Fraction:
        return self.values[self.pair.index_of(J)]

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class InexactFidelityVector:
    """Floating-point fidelities that could not be snapped to exact rationals."""

    pair: SpinPair
    family: Family
    values: tuple[float, ...]
    exact: bool = field(default=False, init=False)

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


def snap_fidelities(
    values: Sequence[float],
    pair: SpinPair,
    family: Family,
    tol: float = SNAP_TOL,
    max_denominator: int = SNAP_MAX_DENOMINATOR,
) -> FidelityVector | InexactFidelityVector:
    """Exact fidelity vector when every entry snaps and the result is normalized."""
    snapped = [snap_rational(float(v), tol, max_denominator) for v in values]
    if all(s is not None for s in snapped) and sum(snapped) == 1 and min(snapped) >= 0:
        return FidelityVector(pair, family, tuple(snapped))
    logger.warning("fidelities %s of %s did not snap to exact rationals", list(values), pair)
    return InexactFidelityVector(pair, family, tuple(float(v) for v in values))


def fractions(values: Iterable[object]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)  # type: ignore[arg-type]

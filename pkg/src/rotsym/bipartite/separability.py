"""PPT transformation and separability of single-pair invariant states."""

from __future__ import annotations

import enum
from fractions import Fraction

from .pair import Family, FidelityVector, SpinPair
from .xmatrix import x_matrix

__all__ = [
    "NotPositive",
    "Separability",
    "decisive",
    "is_ppt",
    "partial_transpose_fidelities",
    "ppt_transform",
    "separability_check",
]


class Separability(enum.Enum):
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"
    UNDECIDED = "Undecided"


class NotPositive(ValueError):
    """A partial transposition produced negative fidelities; ``values`` holds the signed result."""

    def __init__(self, values, message: str | None = None) -> None:
        self.values = values
        super().__init__(message or f"partial transpose is not positive: {values}")


def decisive(pair: SpinPair) -> bool:
    """Whether PPT is equivalent to separability: ``j_A = 1/2``, or ``j_A = 1`` with integer ``j_B``."""
    return pair.ja.two_j == 1 or (pair.ja.two_j == 2 and pair.jb.is_integer)


def ppt_transform(f: FidelityVector) -> tuple[Fraction, ...]:
    """Fidelities after partial transposition, ``q'_J = sum_J' q_J' X_J'J``.

    A Werner-like input maps onto the isotropic projectors and vice versa.  The
    entries may be negative; applying the transform twice returns the input.
    """
    return x_matrix(f.pair).apply(f.values)


def is_ppt(f: FidelityVector) -> bool:
    return all(v >= 0 for v in ppt_transform(f))


def partial_transpose_fidelities(f: FidelityVector) -> FidelityVector:
    """The partially transposed state as a fidelity vector of the other family.

    Raises :class:`NotPositive` when the state is not PPT.
    """
    values = ppt_transform(f)
    if any(v < 0 for v in values):
        raise NotPositive(values)
    return FidelityVector(f.pair, Family(f.family).flipped(), values)


def separability_check(f: FidelityVector) -> Separability:
    """Separable / Entangled where PPT decides; otherwise Undecided for PPT states."""
    if not is_ppt(f):
        return Separability.ENTANGLED
    return Separability.SEPARABLE if decisive(f.pair) else Separability.UNDECIDED

"""The matrix X that maps invariant fidelities through a partial transposition.

``X[J][J']`` is the weight of ``P^J' / (2J'+1)`` in the partial transpose of
``Q^J / (2J+1)``.  Three independent routes are provided:

``TRACE``
    dense projectors, ``X_JJ' = Tr[(1 (x) T)(Q^J / (2J+1)) P^J']`` in floats,
    then snapped to rationals;
``SIXJ``
    ``X_JJ' = (-1)^(2(j_A+j_B)) (2J'+1) {j_A j_B J; j_A j_B J'}``, exact;
``CLOSED``
    explicit rational matrices for ``j_A = 1/2`` and ``j_A = 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np

from ..angular import phase, sixj_closed_form, wigner_6j
from .pair import SNAP_MAX_DENOMINATOR, SNAP_TOL, SpinPair, snap_rational
from .states import partial_transpose, projector

__all__ = [
    "MethodDisagreement",
    "SnapError",
    "UnsupportedClosedForm",
    "XMatrix",
    "XMethod",
    "x_matrix",
    "x_matrix_all",
    "x_matrix_closed",
    "x_matrix_closed_sixj",
    "x_matrix_sixj",
    "x_matrix_trace",
]

Rows = tuple[tuple[Fraction, ...], ...]


class XMethod(enum.Enum):
    TRACE = "trace"
    SIXJ = "sixj"
    CLOSED = "closed"

    @classmethod
    def parse(cls, value: "XMethod | str") -> "XMethod":
        if isinstance(value, XMethod):
            return value
        try:
            return cls(value.strip().lower())
        except ValueError:
            raise ValueError(f"unknown X-matrix method {value!r}") from None


class UnsupportedClosedForm(ValueError):
    """The closed-form X matrix exists only for ``j_A`` in ``{1/2, 1}``."""


class SnapError(ArithmeticError):
    """A float X entry did not lie within tolerance of a small-denominator rational."""


class MethodDisagreement(ArithmeticError):
    """Two X-matrix methods produced different entries."""

    def __init__(self, pair: SpinPair, first: "XMatrix", second: "XMatrix") -> None:
        self.pair = pair
        self.first = first
        self.second = second
        super().__init__(
            f"X matrix for {pair}: {first.method.value} and {second.method.value} disagree"
        )


@dataclass(frozen=True)
class XMatrix:
    """Exact ``d_A x d_A`` X matrix; rows and columns run over ascending ``J``.

    Equality compares entries only, not the method tag.
    """

    pair: SpinPair
    entries: Rows
    method: XMethod = field(compare=False)

    def __post_init__(self) -> None:
        d = self.pair.d_a
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        if len(rows) != d or any(len(r) != d for r in rows):
            raise ValueError(f"X matrix for {self.pair} must be {d}x{d}")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return self.pair.d_a

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, k = idx
        return self.entries[i][k]

    def to_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])

    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(row, Fraction(0)) for row in self.entries)

    def squared(self) -> Rows:
        n = self.size
        e = self.entries
        return tuple(
            tuple(sum((e[i][k] * e[k][l] for k in range(n)), Fraction(0)) for l in range(n))
            for i in range(n)
        )

    def is_involution(self) -> bool:
        sq = self.squared()
        return all(sq[i][k] == (i == k) for i in range(self.size) for k in range(self.size))

    def satisfies_detailed_balance(self) -> bool:
        dims = [J.two_j + 1 for J in self.pair.J_values]
        return all(
            dims[i] * self.entries[i][k] == dims[k] * self.entries[k][i]
            for i in range(self.size)
            for k in range(self.size)
        )

    def check_invariants(self) -> list[str]:
        """Names of violated invariants (empty when all hold)."""
        failures = []
        if any(s != 1 for s in self.row_sums()):
            failures.append("row sums")
        if not self.is_involution():
            failures.append("involution")
        if not self.satisfies_detailed_balance():
            failures.append("detailed balance")
        return failures

    def apply(self, values: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Row vector times X: ``out_J = sum_J' values_J' X_J'J``."""
        n = self.size
        if len(values) != n:
            raise ValueError(f"expected {n} values, got {len(values)}")
        return tuple(
            sum((values[k] * self.entries[k][i] for k in range(n)), Fraction(0)) for i in range(n)
        )


def trace_entries_float(pair: SpinPair) -> np.ndarray:
    Js = pair.J_values
    dims = (pair.d_a, pair.d_b)
    out = np.empty((len(Js), len(Js)))
    for i, J in enumerate(Js):
        qt = partial_transpose(projector(pair, J, "Q"), dims) / (J.two_j + 1)
        for k, Jp in enumerate(Js):
            out[i, k] = np.sum(qt * projector(pair, Jp, "P"))
    return out


def x_matrix_trace(
    pair: SpinPair, tol: float = SNAP_TOL, max_denominator: int = SNAP_MAX_DENOMINATOR
) -> XMatrix:
    """X from dense projectors, each entry snapped to a rational within ``tol``."""
    raw = trace_entries_float(pair)
    rows = []
    for i, row in enumerate(raw):
        snapped = []
        for k, x in enumerate(row):
            q = snap_rational(float(x), tol, max_denominator)
            if q is None:
                raise SnapError(f"X[{i}][{k}] = {x!r} for {pair} does not snap to a rational")
            snapped.append(q)
        rows.append(tuple(snapped))
    return XMatrix(pair, tuple(rows), XMethod.TRACE)


def x_matrix_sixj(pair: SpinPair, phase_convention: Literal["calibrated", "printed"] = "calibrated") -> XMatrix:
    """X from 6-j symbols.

    ``"calibrated"`` uses the overall sign ``(-1)^(2(j_A+j_B))``, which agrees
    with the trace definition for every pair.  ``"printed"`` uses
    ``(-1)^(2 j_B)``; it differs by ``(-1)^(2 j_A)`` and so negates the matrix
    whenever ``j_A`` is half-integer.
    """
    ja, jb = pair.ja, pair.jb
    if phase_convention == "calibrated":
        sign = phase(2 * (ja.two_j + jb.two_j))
    elif phase_convention == "printed":
        sign = phase(2 * jb.two_j)
    else:
        raise ValueError(f"unknown phase convention {phase_convention!r}")
    rows = []
    for J in pair.J_values:
        row = []
        for Jp in pair.J_values:
            sixj = wigner_6j(ja, jb, J, ja, jb, Jp).to_rational()
            row.append(sign * (Jp.two_j + 1) * sixj)
        rows.append(tuple(row))
    return XMatrix(pair, tuple(rows), XMethod.SIXJ)


def x_matrix_closed_sixj(pair: SpinPair) -> XMatrix:
    """The calibrated 6-j route with every symbol taken from a closed-form pattern.

    Raises :class:`~rotsym.angular.NoClosedForm` if some entry has no pattern.
    """
    ja, jb = pair.ja, pair.jb
    sign = phase(2 * (ja.two_j + jb.two_j))
    rows = tuple(
        tuple(
            sign * (Jp.two_j + 1) * sixj_closed_form(ja, jb, J, ja, jb, Jp).to_rational()
            for Jp in pair.J_values
        )
        for J in pair.J_values
    )
    return XMatrix(pair, rows, XMethod.CLOSED)


def _closed_rows(pair: SpinPair) -> list[list[Fraction]]:
    b = pair.jb.value
    if pair.ja.two_j == 2:
        rows = [
            [b + 1, -(b + 1) * (2 * b + 1), b * (b + 1) * (2 * b + 3)],
            [-(b + 1) * (2 * b - 1), (b * b + b - 1) * (2 * b + 1), b * (2 * b + 3)],
            [b * (b + 1) * (2 * b - 1), b * (2 * b + 1), b],
        ]
        den = b * (b + 1) * (2 * b + 1)
    elif pair.ja.two_j == 1:
        rows = [[Fraction(-1), 2 * (b + 1)], [2 * b, Fraction(1)]]
        den = 2 * b + 1
    else:
        raise UnsupportedClosedForm(f"no closed-form X matrix for j_A={pair.ja}; need 1/2 or 1")
    return [[Fraction(x) / den for x in row] for row in rows]


def x_matrix_closed(pair: SpinPair) -> XMatrix:
    """Explicit X for ``j_A = 1/2`` (2x2) and ``j_A = 1`` (3x3) as rational functions of ``j_B``."""
    rows = _closed_rows(pair)
    return XMatrix(pair, tuple(tuple(r) for r in rows), XMethod.CLOSED)


@lru_cache(maxsize=1024)
def _x_matrix_cached(pair: SpinPair, method: XMethod) -> XMatrix:
    if method is XMethod.TRACE:
        return x_matrix_trace(pair)
    if method is XMethod.SIXJ:
        return x_matrix_sixj(pair)
    return x_matrix_closed(pair)


def x_matrix(pair: SpinPair, method: XMethod | str = XMethod.SIXJ) -> XMatrix:
    """X matrix of ``pair`` by the requested method (results are cached)."""
    return _x_matrix_cached(pair, XMethod.parse(method))


def x_matrix_all(pair: SpinPair) -> dict[XMethod, XMatrix]:
    """Every applicable method; raises :class:`MethodDisagreement` on any mismatch."""
    results = {XMethod.TRACE: x_matrix(pair, XMethod.TRACE), XMethod.SIXJ: x_matrix(pair, XMethod.SIXJ)}
    if pair.ja.two_j in (1, 2):
        results[XMethod.CLOSED] = x_matrix(pair, XMethod.CLOSED)
    reference = results[XMethod.SIXJ]
    for method, result in results.items():
        if result != reference:
            raise MethodDisagreement(pair, reference, result)
    return results

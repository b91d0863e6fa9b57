"""Coupled vectors, invariant projectors and the exact twirl.

Dense operators use the product basis ``|m_A; m_B> = |j_A, m_A> (x) |j_B, m_B>``
with magnetic numbers in descending order, so index ``a * d_B + b`` holds
``m_A = j_A - a`` and ``m_B = j_B - b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import numpy as np

from ..angular import HalfInt, SpinLike, SqrtRational, clebsch_gordan, half, phase
from .pair import (
    SNAP_MAX_DENOMINATOR,
    SNAP_TOL,
    Family,
    FidelityVector,
    InexactFidelityVector,
    SpinPair,
    snap_fidelities,
)

__all__ = [
    "CoupledVector",
    "check_state",
    "coupled_vector",
    "density_from_fidelities",
    "fidelities_from_density",
    "intertwiner_v",
    "partial_transpose",
    "product_state",
    "projector",
    "schmidt_rank",
    "twirl",
]


@dataclass(frozen=True)
class CoupledVector:
    """``|J M>`` expanded exactly in the product basis."""

    pair: SpinPair
    J: HalfInt
    M: HalfInt
    coefficients: dict[tuple[HalfInt, HalfInt], SqrtRational]

    def to_array(self) -> np.ndarray:
        vec = np.zeros(self.pair.dim)
        for (ma, mb), c in self.coefficients.items():
            vec[_index(self.pair, ma, mb)] = float(c)
        return vec

    def norm_squared(self) -> Fraction:
        return sum((c.square() for c in self.coefficients.values()), Fraction(0))


def _index(pair: SpinPair, ma: HalfInt, mb: HalfInt) -> int:
    a = (pair.ja.two_j - ma.two_j) // 2
    b = (pair.jb.two_j - mb.two_j) // 2
    return a * pair.d_b + b


def coupled_vector(pair: SpinPair, J: SpinLike, M: SpinLike) -> CoupledVector:
    """Clebsch-Gordan expansion of ``|J M>``; only nonzero terms are stored."""
    J, M = half(J), half(M)
    pair.index_of(J)
    if abs(M.two_j) > J.two_j or (J.two_j - M.two_j) % 2:
        raise ValueError(f"M={M} out of range for J={J}")
    coeffs = {}
    for ma in pair.ja.magnetic_values():
        mb = M - ma
        if abs(mb.two_j) > pair.jb.two_j:
            continue
        c = clebsch_gordan(pair.ja, ma, pair.jb, mb, J, M)
        if c:
            coeffs[(ma, mb)] = c
    return CoupledVector(pair, J, M, coeffs)


def schmidt_rank(v: CoupledVector) -> int:
    """Schmidt rank of ``|J M>``.

    Each ``m_A`` pairs with a single ``m_B = M - m_A``, so the product terms are
    already bi-orthogonal and the rank is the number of nonzero coefficients.
    """
    return len(v.coefficients)


def intertwiner_v(j: SpinLike) -> np.ndarray:
    """``V|j, m> = (-1)^(j-m) |j, -m>`` as a signed permutation matrix."""
    j = half(j)
    d = j.dim
    V = np.zeros((d, d), dtype=int)
    for k, m in enumerate(j.magnetic_values()):
        V[d - 1 - k, k] = phase(j.two_j - m.two_j)
    return V


@lru_cache(maxsize=512)
def _projector_cached(pair: SpinPair, two_J: int, kind: str) -> np.ndarray:
    J = HalfInt(two_J)
    Q = np.zeros((pair.dim, pair.dim))
    for M in J.magnetic_values():
        v = coupled_vector(pair, J, M).to_array()
        Q += np.outer(v, v)
    if kind == "P":
        W = np.kron(np.eye(pair.d_a), intertwiner_v(pair.jb))
        Q = W @ Q @ W.T
    Q.flags.writeable = False
    return Q


def projector(pair: SpinPair, J: SpinLike, kind: Literal["Q", "P"] | Family = "Q") -> np.ndarray:
    """Invariant projector ``Q^J`` or ``P^J = (1 (x) V) Q^J (1 (x) V^+)`` (read-only array)."""
    J = half(J)
    pair.index_of(J)
    if isinstance(kind, Family):
        kind = "P" if kind == Family.ISOTROPIC else "Q"
    if kind not in ("Q", "P"):
        raise ValueError(f"projector kind must be 'Q' or 'P', got {kind!r}")
    return _projector_cached(pair, J.two_j, kind)


def partial_transpose(rho: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Transpose the second tensor factor of a bipartite operator."""
    da, db = dims
    t = np.asarray(rho).reshape(da, db, da, db)
    return t.transpose(0, 3, 2, 1).reshape(da * db, da * db)


def product_state(pair: SpinPair, ma: SpinLike, mb: SpinLike) -> np.ndarray:
    """Density matrix of ``|m_A; m_B>``."""
    ma, mb = half(ma), half(mb)
    for j, m in ((pair.ja, ma), (pair.jb, mb)):
        if abs(m.two_j) > j.two_j or (j.two_j - m.two_j) % 2:
            raise ValueError(f"m={m} is not a state of spin {j}")
    rho = np.zeros((pair.dim, pair.dim))
    i = _index(pair, ma, mb)
    rho[i, i] = 1.0
    return rho


def _check_density(rho: np.ndarray, pair: SpinPair) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.shape != (pair.dim, pair.dim):
        raise ValueError(f"density matrix of shape {rho.shape} does not match {pair} (dim {pair.dim})")
    if abs(np.trace(rho) - 1) > 1e-8:
        raise ValueError(f"density matrix has trace {np.trace(rho)}, expected 1")
    return rho


def check_state(rho: np.ndarray, floor: float = -1e-10) -> np.ndarray:
    """Validate a density matrix: square, symmetric, unit trace, eigenvalues ``>= floor``."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=1e-12):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > 1e-8:
        raise ValueError(f"density matrix has trace {np.trace(rho)}, expected 1")
    lowest = np.linalg.eigvalsh(rho).min()
    if lowest < floor:
        raise ValueError(f"density matrix has eigenvalue {lowest} below {floor}")
    return rho


def raw_fidelities(rho: np.ndarray, pair: SpinPair, family: Family = Family.WERNER) -> np.ndarray:
    """Float fidelities ``Tr(rho Pi^J)`` without snapping."""
    rho = _check_density(rho, pair)
    return np.array(
        [np.real(np.trace(rho @ projector(pair, J, family))) for J in pair.J_values]
    )


def fidelities_from_density(
    rho: np.ndarray,
    pair: SpinPair,
    family: Family = Family.WERNER,
    *,
    tol: float = SNAP_TOL,
    max_denominator: int = SNAP_MAX_DENOMINATOR,
) -> FidelityVector | InexactFidelityVector:
    """Project ``rho`` onto the invariant simplex: ``q_J = Tr(rho Q^J)`` (``P^J`` for isotropic).

    This is the exact twirl.  Values are snapped to rationals when each lies
    within ``tol`` of a fraction with denominator at most ``max_denominator``;
    otherwise an :class:`InexactFidelityVector` is returned.
    """
    family = Family.parse(family)
    return snap_fidelities(raw_fidelities(rho, pair, family), pair, family, tol, max_denominator)


def density_from_fidelities(f: FidelityVector | InexactFidelityVector) -> np.ndarray:
    """``rho = sum_J f_J Pi^J / (2J + 1)``."""
    rho = np.zeros((f.pair.dim, f.pair.dim))
    for J, value in zip(f.pair.J_values, f.values):
        if value:
            rho += float(value) / (J.two_j + 1) * projector(f.pair, J, f.family)
    return rho


def twirl(rho: np.ndarray, pair: SpinPair, family: Family = Family.WERNER) -> np.ndarray:
    """Exact (Haar-averaged) twirl of ``rho`` as a dense matrix."""
    values = raw_fidelities(rho, pair, family)
    return density_from_fidelities(InexactFidelityVector(pair, Family.parse(family), tuple(values)))

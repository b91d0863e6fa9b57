"""Dense multi-pair operators, used to cross-check the factorized routines.

Dense operators on ``K`` pairs use the pair-grouped tensor order
``A_1 B_1 A_2 B_2 ... A_K B_K``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce as fold
from itertools import product
from typing import Sequence

import numpy as np

from ..bipartite import Family, SpinPair, projector, x_matrix
from .core import BinaryMask, MultiFidelity, as_mask

__all__ = [
    "dense_sigma_x",
    "multi_density",
    "multi_fidelities_float",
    "multi_projector",
    "partial_transpose_mask",
]


def dense_sigma_x(pairs: Sequence[SpinPair], sigma) -> list[list[Fraction]]:
    """Exact Kronecker product ``X^(sigma_1) (x) ... (x) X^(sigma_K)``."""
    sigma = as_mask(sigma)
    factors = []
    for pair, bit in zip(pairs, sigma):
        n = pair.d_a
        if bit:
            factors.append([list(row) for row in x_matrix(pair).entries])
        else:
            factors.append([[Fraction(int(i == k)) for k in range(n)] for i in range(n)])

    def kron(a, b):
        return [[x * y for x in ra for y in rb] for ra in a for rb in b]

    return fold(kron, factors)


def multi_projector(pairs: Sequence[SpinPair], Js, family) -> np.ndarray:
    family = as_mask(family)
    mats = [projector(p, J, Family(bit)) for p, J, bit in zip(pairs, Js, family)]
    return fold(np.kron, mats)


def multi_density(s: MultiFidelity) -> np.ndarray:
    """``sum_J pi_J Pi^J / Tr Pi^J`` as a dense matrix."""
    dim = int(np.prod([p.dim for p in s.pairs]))
    rho = np.zeros((dim, dim))
    for Js, value in zip(s.multi_indices(), s.values):
        if value:
            weight = float(value) / np.prod([J.two_j + 1 for J in Js])
            rho += weight * multi_projector(s.pairs, Js, s.family)
    return rho


def multi_fidelities_float(rho: np.ndarray, pairs: Sequence[SpinPair], family) -> np.ndarray:
    """``Tr(rho Pi^J)`` for every multi-index, in storage order."""
    family = as_mask(family)
    return np.array(
        [
            np.sum(rho * multi_projector(pairs, Js, family))
            for Js in product(*(p.J_values for p in pairs))
        ]
    )


def partial_transpose_mask(rho: np.ndarray, pairs: Sequence[SpinPair], sigma) -> np.ndarray:
    """Transpose ``B_i`` for every slot with ``sigma_i = 1``."""
    sigma = as_mask(sigma)
    dims = [d for p in pairs for d in (p.d_a, p.d_b)]
    n = len(dims)
    t = np.asarray(rho).reshape(dims + dims)
    axes = list(range(2 * n))
    for i, bit in enumerate(sigma):
        if bit:
            b = 2 * i + 1
            axes[b], axes[n + b] = axes[n + b], axes[b]
    total = int(np.prod(dims))
    return t.transpose(axes).reshape(total, total)

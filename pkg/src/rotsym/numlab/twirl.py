"""Monte-Carlo twirl and invariance residuals over one or several spin pairs.

Operators on ``K`` pairs use the pair-grouped order ``A_1 B_1 ... A_K B_K``.
Pair ``i`` is rotated by its own Haar-random ``R_i`` through
``D(R_i) (x) D(R_i)`` (family bit 0) or ``D(R_i) (x) conj(D(R_i))`` (bit 1).
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from functools import reduce as fold
from itertools import product
from typing import Sequence

import numpy as np

from ..bipartite import SpinPair
from ..multipartite import BinaryMask, as_mask, thread_count
from ..multipartite.dense import multi_fidelities_float, multi_projector
from .rotations import haar_quaternions, make_rng, wigner_d_batch

__all__ = ["exact_twirl", "invariance_residual", "mc_twirl", "pair_unitaries"]

logger = logging.getLogger(__name__)


def _normalize(pairs, families) -> tuple[tuple[SpinPair, ...], BinaryMask]:
    if isinstance(pairs, SpinPair):
        pairs = (pairs,)
    pairs = tuple(pairs)
    if families is None:
        families = BinaryMask.zeros(len(pairs))
    elif isinstance(families, int):
        families = BinaryMask((families,) * len(pairs))
    families = as_mask(families)
    if len(families) != len(pairs):
        raise ValueError(f"family mask {families} does not match {len(pairs)} pairs")
    return pairs, families


def _check_dim(rho: np.ndarray, pairs: Sequence[SpinPair]) -> np.ndarray:
    rho = np.asarray(rho)
    dim = int(np.prod([p.dim for p in pairs]))
    if rho.shape != (dim, dim):
        raise ValueError(f"operator of shape {rho.shape} does not match dimension {dim}")
    return rho


def _batched_kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, p, q = a.shape
    _, r, s = b.shape
    return np.einsum("nij,nkl->nikjl", a, b).reshape(n, p * r, q * s)


def pair_unitaries(pair: SpinPair, family: int, quaternions: np.ndarray) -> np.ndarray:
    """``D^(j_A)(R) (x) D^(j_B)(R)`` (conjugated second factor for family 1), batched."""
    Da = wigner_d_batch(pair.ja, quaternions)
    Db = wigner_d_batch(pair.jb, quaternions)
    if family:
        Db = Db.conj()
    return _batched_kron(Da, Db)


def _total_unitaries(pairs, families, quats: np.ndarray) -> np.ndarray:
    # quats has shape (n, K, 4)
    mats = [pair_unitaries(p, bit, quats[:, i, :]) for i, (p, bit) in enumerate(zip(pairs, families))]
    return fold(_batched_kron, mats)


def _chunk_sum(rho, pairs, families, seed_seq: np.random.SeedSequence, n: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed_seq))
    quats = haar_quaternions(rng, n * len(pairs)).reshape(n, len(pairs), 4)
    U = _total_unitaries(pairs, families, quats)
    A = U @ rho
    d = rho.shape[0]
    # sum_n A_n U_n^+ as a single matrix product
    left = A.transpose(1, 0, 2).reshape(d, n * d)
    right = U.conj().transpose(0, 2, 1).reshape(n * d, d)
    return left @ right


def mc_twirl(
    rho: np.ndarray,
    pairs,
    families=None,
    n: int = 100_000,
    seed: int | None = None,
    chunk: int = 8192,
    threads: int | None = None,
) -> np.ndarray:
    """Average ``U rho U^+`` over ``n`` Haar-random rotation tuples.

    Samples are drawn in chunks of ``chunk``; chunk ``c`` uses the ``c``-th
    child of the seed, so the result depends only on ``seed``, ``n`` and
    ``chunk``, not on the number of threads.
    """
    if seed is None:
        raise ValueError("a seed is required for sampling")
    if n < 1 or chunk < 1:
        raise ValueError("n and chunk must be positive")
    pairs, families = _normalize(pairs, families)
    rho = _check_dim(rho, pairs)
    make_rng(seed)  # validates the seed
    logger.info("mc_twirl seed=%d n=%d chunk=%d pairs=%s", seed, n, chunk, [str(p) for p in pairs])
    sizes = [chunk] * (n // chunk) + ([n % chunk] if n % chunk else [])
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    threads = thread_count() if threads is None else max(1, threads)

    def work(c: int) -> np.ndarray:
        return _chunk_sum(rho, pairs, families, children[c], sizes[c])

    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(work, range(len(sizes))))
    else:
        partials = [work(c) for c in range(len(sizes))]
    total = partials[0]
    for p in partials[1:]:
        total = total + p
    return total / n


def exact_twirl(rho: np.ndarray, pairs, families=None) -> np.ndarray:
    """Projection onto invariant operators: ``sum_J Tr(rho Pi^J) Pi^J / Tr Pi^J``."""
    pairs, families = _normalize(pairs, families)
    rho = _check_dim(rho, pairs)
    weights = np.real(multi_fidelities_float(rho, pairs, families))
    out = np.zeros(rho.shape, dtype=complex if np.iscomplexobj(rho) else float)
    for Js, w in zip(product(*(p.J_values for p in pairs)), weights):
        if w:
            P = multi_projector(pairs, Js, families)
            out = out + w / np.trace(P) * P
    return out


def invariance_residual(
    rho: np.ndarray, pairs, families=None, m: int = 100, seed: int | None = None
) -> float:
    """Largest Frobenius norm ``||U rho U^+ - rho||`` over ``m`` random rotation tuples."""
    if seed is None:
        raise ValueError("a seed is required for sampling")
    pairs, families = _normalize(pairs, families)
    rho = _check_dim(rho, pairs)
    logger.info("invariance_residual seed=%d m=%d", seed, m)
    quats = haar_quaternions(make_rng(seed), m * len(pairs)).reshape(m, len(pairs), 4)
    U = _total_unitaries(pairs, families, quats)
    moved = U @ rho @ U.conj().transpose(0, 2, 1)
    return float(np.max(np.linalg.norm(moved - rho, axis=(1, 2))))

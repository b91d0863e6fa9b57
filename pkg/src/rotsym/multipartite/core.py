"""Invariant states of K spin pairs and their sigma-partial transpositions.

A state of ``K`` pairs is described by fidelities indexed by the multi-index
``(J_1, ..., J_K)``, stored row-major with slot 1 outermost and each ``J_i``
ascending.  The family mask says, per slot, whether the ``Q`` (bit 0) or ``P``
(bit 1) projectors are used.

Partial transposition on the slots selected by a mask ``sigma`` acts on the
fidelities as ``X^sigma = X^(sigma_1) (x) ... (x) X^(sigma_K)``.  It is never
formed densely: each selected slot is contracted with its own small X.
Exact results come from integer arithmetic on scaled values, so sign checks
never touch floating point.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce as fold
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from ..angular import HalfInt, SpinLike, half
from ..bipartite import (
    Family,
    FidelityVector,
    NotPositive,
    SpinPair,
    decisive,
    x_matrix,
)

__all__ = [
    "Analysis",
    "BinaryMask",
    "MultiFidelity",
    "Verdict",
    "all_masks",
    "analyze",
    "apply_partial_transpose_family",
    "classify",
    "extremal_separable_fidelities",
    "reduce",
    "sigma_ppt_transform",
    "sigma_report",
    "theorem_applies",
    "thread_count",
]

INT64_LIMIT = 2**62


@dataclass(frozen=True)
class BinaryMask:
    """Bits ``(sigma_1, ..., sigma_K)``; written as the string ``"sigma_1 sigma_2 ..."``.

    As an integer, ``sigma_1`` is the least significant bit, so counting
    upward flips the first slot fastest.
    """

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"mask bits must be 0 or 1, got {self.bits}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "BinaryMask":
        s = text.strip()
        if not s or any(c not in "01" for c in s):
            raise ValueError(f"not a binary mask: {text!r}")
        return cls(tuple(int(c) for c in s))

    @classmethod
    def zeros(cls, k: int) -> "BinaryMask":
        return cls((0,) * k)

    @classmethod
    def ones(cls, k: int) -> "BinaryMask":
        return cls((1,) * k)

    @classmethod
    def from_index(cls, index: int, k: int) -> "BinaryMask":
        if not 0 <= index < 2**k:
            raise ValueError(f"mask index {index} out of range for K={k}")
        return cls(tuple((index >> i) & 1 for i in range(k)))

    @property
    def index(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    def __xor__(self, other: "BinaryMask") -> "BinaryMask":
        if len(self) != len(other):
            raise ValueError("masks of different length")
        return BinaryMask(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def drop(self, slot: int) -> "BinaryMask":
        """Remove the bit of 1-based ``slot``."""
        return BinaryMask(self.bits[: slot - 1] + self.bits[slot:])

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, i: int) -> int:
        return self.bits[i]

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def as_mask(value: "BinaryMask | str | Sequence[int]") -> BinaryMask:
    if isinstance(value, BinaryMask):
        return value
    if isinstance(value, str):
        return BinaryMask.parse(value)
    return BinaryMask(tuple(value))


def all_masks(k: int) -> Iterator[BinaryMask]:
    """All ``2^K`` masks in ascending index order."""
    for index in range(2**k):
        yield BinaryMask.from_index(index, k)


@dataclass(frozen=True)
class MultiFidelity:
    """Exact fidelities of a ``2K``-partite invariant state.

    ``values`` is the flattened tensor of shape ``tuple(p.d_a for p in pairs)``.
    """

    pairs: tuple[SpinPair, ...]
    family: BinaryMask
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        pairs = tuple(self.pairs)
        if not pairs:
            raise ValueError("need at least one spin pair")
        family = as_mask(self.family)
        if len(family) != len(pairs):
            raise ValueError(f"family mask {family} has length {len(family)}, expected {len(pairs)}")
        values = tuple(_exact(v) for v in self.values)
        size = math.prod(p.d_a for p in pairs)
        if len(values) != size:
            raise ValueError(f"expected {size} fidelities, got {len(values)}")
        if any(v < 0 for v in values):
            raise ValueError("negative fidelity")
        if sum(values) != 1:
            raise ValueError(f"fidelities sum to {sum(values)}, not 1")
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "values", values)

    @property
    def K(self) -> int:
        return len(self.pairs)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(p.d_a for p in self.pairs)

    def multi_indices(self) -> Iterator[tuple[HalfInt, ...]]:
        """Multi-indices ``(J_1, ..., J_K)`` in storage order."""
        return product(*(p.J_values for p in self.pairs))

    def __getitem__(self, Js: Sequence[SpinLike]) -> Fraction:
        if len(Js) != self.K:
            raise ValueError(f"expected {self.K} total spins")
        flat = np.ravel_multi_index(
            tuple(p.index_of(J) for p, J in zip(self.pairs, Js)), self.shape
        )
        return self.values[int(flat)]

    @classmethod
    def delta(
        cls,
        pairs: Sequence[SpinPair],
        Js: Sequence[SpinLike],
        family: "BinaryMask | str | Sequence[int] | None" = None,
    ) -> "MultiFidelity":
        pairs = tuple(pairs)
        shape = tuple(p.d_a for p in pairs)
        values = [Fraction(0)] * math.prod(shape)
        flat = np.ravel_multi_index(tuple(p.index_of(J) for p, J in zip(pairs, Js)), shape)
        values[int(flat)] = Fraction(1)
        family = BinaryMask.zeros(len(pairs)) if family is None else family
        return cls(pairs, as_mask(family), tuple(values))

    @classmethod
    def uniform(cls, pairs: Sequence[SpinPair], family=None) -> "MultiFidelity":
        pairs = tuple(pairs)
        size = math.prod(p.d_a for p in pairs)
        family = BinaryMask.zeros(len(pairs)) if family is None else family
        return cls(pairs, as_mask(family), (Fraction(1, size),) * size)

    @classmethod
    def product(cls, factors: Sequence[FidelityVector]) -> "MultiFidelity":
        """Tensor product of single-pair fidelity vectors."""
        values = fold(lambda acc, f: [a * b for a in acc for b in f.values], factors, [Fraction(1)])
        return cls(
            tuple(f.pair for f in factors),
            BinaryMask(tuple(int(f.family) for f in factors)),
            tuple(values),
        )

    def to_single(self) -> FidelityVector:
        if self.K != 1:
            raise ValueError("only a one-pair state converts to a FidelityVector")
        return FidelityVector(self.pairs[0], Family(self.family[0]), self.values)

    def permuted(self, order: Sequence[int]) -> "MultiFidelity":
        """Reorder slots; ``order[k]`` is the 0-based old slot placed at position ``k``."""
        order = list(order)
        if sorted(order) != list(range(self.K)):
            raise ValueError(f"{order} is not a permutation of {self.K} slots")
        tensor = np.array(self.values, dtype=object).reshape(self.shape).transpose(order)
        return MultiFidelity(
            tuple(self.pairs[i] for i in order),
            BinaryMask(tuple(self.family[i] for i in order)),
            tuple(tensor.ravel()),
        )


def _exact(x: object) -> Fraction:
    if isinstance(x, float):
        raise TypeError("fidelities must be exact, not float")
    return Fraction(x)  # type: ignore[arg-type]


def theorem_applies(pairs: Iterable[SpinPair]) -> bool:
    """Whether every pair has ``j_A = 1/2``, or ``j_A = 1`` with integer ``j_B``."""
    return all(decisive(p) for p in pairs)


# --- integer-scaled contraction ---

@lru_cache(maxsize=256)
def _scaled_x(pair: SpinPair) -> tuple[np.ndarray, int]:
    """Integer matrix ``D * X`` and the common denominator ``D``."""
    X = x_matrix(pair)
    D = math.lcm(*(x.denominator for row in X.entries for x in row))
    ints = np.array([[int(x * D) for x in row] for row in X.entries], dtype=object)
    return ints, D


def _scaled_values(s: MultiFidelity) -> tuple[list[int], int]:
    L = math.lcm(*(v.denominator for v in s.values))
    return [int(v * L) for v in s.values], L


def _engine(s: MultiFidelity, slots: Iterable[int]):
    """Integer tensor, per-slot integer X matrices and a dtype safe for contracting ``slots``."""
    ints, L = _scaled_values(s)
    xs = [_scaled_x(p) for p in s.pairs]
    bound = sum(abs(v) for v in ints)
    for i in slots:
        bound *= int(max(abs(x) for x in xs[i][0].ravel()))
    dtype = np.int64 if bound < INT64_LIMIT else object
    tensor = np.array(ints, dtype=dtype).reshape(s.shape)
    mats = [x.astype(dtype) for x, _ in xs]
    return tensor, mats, [D for _, D in xs], L


def _contract(tensor: np.ndarray, axis: int, mat: np.ndarray) -> np.ndarray:
    # out[..., J', ...] = sum_J tensor[..., J, ...] mat[J, J']
    out = np.tensordot(tensor, mat, axes=([axis], [0]))
    return np.moveaxis(out, -1, axis)


def sigma_ppt_transform(s: MultiFidelity, sigma: "BinaryMask | str | Sequence[int]") -> tuple[Fraction, ...]:
    """Signed fidelities ``sum_J q_J X^sigma_{J J'}`` after partial transposition on ``sigma``.

    Slots with ``sigma_i = 0`` are untouched.  The state is sigma-PPT iff every
    entry is non-negative.
    """
    sigma = as_mask(sigma)
    if len(sigma) != s.K:
        raise ValueError(f"mask {sigma} has length {len(sigma)}, expected {s.K}")
    slots = [i for i, b in enumerate(sigma) if b]
    tensor, mats, dens, L = _engine(s, slots)
    for i in slots:
        tensor = _contract(tensor, i, mats[i])
    scale = L * math.prod(dens[i] for i in slots)
    return tuple(Fraction(int(v), scale) for v in tensor.ravel())


def apply_partial_transpose_family(s: MultiFidelity, nu: "BinaryMask | str | Sequence[int]") -> MultiFidelity:
    """Partially transpose on ``nu``: the family mask becomes ``mu XOR nu``.

    Raises :class:`~rotsym.bipartite.NotPositive` carrying the signed
    fidelities when the state is not nu-PPT.
    """
    nu = as_mask(nu)
    values = sigma_ppt_transform(s, nu)
    if any(v < 0 for v in values):
        raise NotPositive(values, f"state is not {nu}-PPT")
    return MultiFidelity(s.pairs, s.family ^ nu, values)


def sigma_report(s: MultiFidelity) -> dict[BinaryMask, tuple[Fraction, ...]]:
    """Transformed fidelities for every mask, in ascending mask order."""
    return {mask: sigma_ppt_transform(s, mask) for mask in all_masks(s.K)}


# --- classification ---

class Verdict(str, enum.Enum):
    FULLY_SEPARABLE = "fully-separable"
    BISEPARABLE = "biseparable"
    ENTANGLED = "entangled"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Analysis:
    verdict: Verdict
    failing_mask: BinaryMask | None
    theorem_applies: bool
    all_ones_ppt: bool


def thread_count() -> int:
    """Worker threads for mask enumeration, from ``ROTSYM_THREADS`` (default 1)."""
    raw = os.environ.get("ROTSYM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"ROTSYM_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def _first_failing(tensor: np.ndarray, mats: list[np.ndarray], top: int, base: int) -> int | None:
    """Smallest failing mask index in the subtree where slots ``> top`` are fixed to ``base``.

    Slot ``top`` is decided first, so leaves are visited in ascending index order.
    """
    if top < 0:
        return base if (tensor < 0).any() else None
    found = _first_failing(tensor, mats, top - 1, base)
    if found is not None:
        return found
    if mats[top].shape == (1, 1):
        # a spin-zero slot has X = [[1]]: this subtree repeats the one just cleared
        return None
    return _first_failing(_contract(tensor, top, mats[top]), mats, top - 1, base | 1 << top)


def _find_failing_mask(s: MultiFidelity, threads: int) -> int | None:
    tensor, mats, _, _ = _engine(s, range(s.K))
    K = s.K
    split = min(K, max(0, int(math.log2(threads)))) if threads > 1 else 0
    if split == 0:
        return _first_failing(tensor, mats, K - 1, 0)

    def subtree(high: int) -> int | None:
        t = tensor
        base = 0
        for k in range(split):
            slot = K - split + k
            if (high >> k) & 1:
                t = _contract(t, slot, mats[slot])
                base |= 1 << slot
        return _first_failing(t, mats, K - split - 1, base)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(subtree, range(2**split)))
    hits = [r for r in results if r is not None]
    return min(hits) if hits else None


def analyze(s: MultiFidelity, threads: int | None = None) -> Analysis:
    """Check sigma-PPT over all ``2^K`` masks and classify.

    When every pair has ``j_A = 1/2`` (any ``j_B``) or ``j_A = 1`` with integer
    ``j_B``, PPT across every mask is equivalent to full separability, and PPT
    across the all-ones mask to separability between the A and B halves.
    Otherwise a failing mask proves entanglement and passing all masks leaves
    the question open.

    The reported failing mask is the first in ascending index order; the
    result does not depend on the thread count.
    """
    threads = thread_count() if threads is None else max(1, threads)
    failing = _find_failing_mask(s, threads)
    applies = theorem_applies(s.pairs)
    ones = BinaryMask.ones(s.K)
    ones_ppt = failing is None or all(v >= 0 for v in sigma_ppt_transform(s, ones))
    if failing is None:
        verdict = Verdict.FULLY_SEPARABLE if applies else Verdict.UNDECIDED
    elif applies and ones_ppt:
        verdict = Verdict.BISEPARABLE
    else:
        verdict = Verdict.ENTANGLED
    mask = None if failing is None else BinaryMask.from_index(failing, s.K)
    return Analysis(verdict, mask, applies, ones_ppt)


def classify(s: MultiFidelity, threads: int | None = None) -> Verdict:
    return analyze(s, threads).verdict


# --- reductions ---

def reduce(s: MultiFidelity, slot: int) -> MultiFidelity:
    """Trace out pair ``slot`` (1-based): sum the fidelities over ``J_slot``."""
    if s.K < 2:
        raise ValueError("cannot reduce a single-pair state")
    if not 1 <= slot <= s.K:
        raise ValueError(f"slot {slot} out of range 1..{s.K}")
    tensor = np.array(s.values, dtype=object).reshape(s.shape)
    reduced = tensor.sum(axis=slot - 1)
    pairs = s.pairs[: slot - 1] + s.pairs[slot:]
    return MultiFidelity(pairs, s.family.drop(slot), tuple(np.ravel(reduced)))


def extremal_separable_fidelities(pairs: Sequence[SpinPair]) -> MultiFidelity:
    """Twirl of the all-stretched product state: a delta at ``J_i = j_A,i + j_B,i``."""
    pairs = tuple(pairs)
    return MultiFidelity.delta(pairs, [p.J_max for p in pairs])


def parse_pairs(items: Iterable[tuple[SpinLike, SpinLike]]) -> tuple[SpinPair, ...]:
    return tuple(SpinPair(half(a), half(b)) for a, b in items)

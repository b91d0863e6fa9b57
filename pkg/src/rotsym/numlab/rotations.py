"""Rotations as unit quaternions, Wigner D matrices and Haar sampling."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb, factorial, sqrt

import numpy as np

from ..angular import SpinLike, half

__all__ = [
    "Rotation",
    "haar_quaternions",
    "haar_sample",
    "haar_samples",
    "make_rng",
    "su2_matrices",
    "wigner_d",
    "wigner_d_batch",
]

logger = logging.getLogger(__name__)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator (Philox) from an explicit non-negative 64-bit seed."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    return np.random.Generator(np.random.Philox(int(seed)))


def _hamilton(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    w1, x1, y1, z1 = np.moveaxis(p, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


@dataclass(frozen=True)
class Rotation:
    """A rotation stored as a unit quaternion ``(w, x, y, z)``.

    The quaternion ``(cos(t/2), sin(t/2) n)`` is the rotation by angle ``t``
    about the unit axis ``n``; ``q`` and ``-q`` give the same rotation.
    """

    quaternion: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        q = tuple(float(c) for c in self.quaternion)
        if len(q) != 4:
            raise ValueError("a quaternion has four components")
        if abs(sum(c * c for c in q) - 1) > 1e-12:
            raise ValueError(f"quaternion {q} is not unit norm")
        object.__setattr__(self, "quaternion", q)

    @classmethod
    def identity(cls) -> "Rotation":
        return cls((1.0, 0.0, 0.0, 0.0))

    @classmethod
    def about_axis(cls, axis, angle: float) -> "Rotation":
        n = np.asarray(axis, dtype=float)
        n = n / np.linalg.norm(n)
        s = np.sin(angle / 2)
        return cls((np.cos(angle / 2), *(s * n)))

    @classmethod
    def from_array(cls, q) -> "Rotation":
        q = np.asarray(q, dtype=float)
        return cls(tuple(q / np.linalg.norm(q)))

    def as_array(self) -> np.ndarray:
        return np.array(self.quaternion)

    def compose(self, other: "Rotation") -> "Rotation":
        """``self`` applied after ``other``."""
        return Rotation.from_array(_hamilton(self.as_array(), other.as_array()))

    def __matmul__(self, other: "Rotation") -> "Rotation":
        return self.compose(other)

    def inverse(self) -> "Rotation":
        w, x, y, z = self.quaternion
        return Rotation((w, -x, -y, -z))

    def to_matrix(self) -> np.ndarray:
        """The 3x3 orthogonal matrix."""
        w, x, y, z = self.quaternion
        return np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
                [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
                [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
            ]
        )

    def su2(self) -> np.ndarray:
        return su2_matrices(self.as_array()[None, :])[0]


def su2_matrices(q: np.ndarray) -> np.ndarray:
    """``w - i(x s_x + y s_y + z s_z)`` for quaternions of shape ``(n, 4)``."""
    w, x, y, z = (q[:, k] for k in range(4))
    U = np.empty((q.shape[0], 2, 2), dtype=complex)
    U[:, 0, 0] = w - 1j * z
    U[:, 0, 1] = -y - 1j * x
    U[:, 1, 0] = y - 1j * x
    U[:, 1, 1] = w + 1j * z
    return U


def _d_terms(two_j: int):
    """Coefficients of the symmetric-power expansion, cached per spin."""
    terms = []
    n = two_j
    for r in range(n + 1):  # row: m' = j - r
        p_row = n - r  # j + m'
        for c in range(n + 1):  # column: m = j - c
            p_col = n - c  # j + m
            q_col = c  # j - m
            norm = sqrt(factorial(p_row) * factorial(r) / (factorial(p_col) * factorial(q_col)))
            for k in range(max(0, p_row - q_col), min(p_col, p_row) + 1):
                coeff = norm * comb(p_col, k) * comb(q_col, p_row - k)
                # powers of a, c, b, d
                terms.append((r, c, coeff, k, p_col - k, p_row - k, q_col - p_row + k))
    return terms


_TERMS: dict[int, list] = {}


def wigner_d_batch(j: SpinLike, q: np.ndarray) -> np.ndarray:
    """Wigner D matrices for quaternions of shape ``(n, 4)``; result ``(n, d, d)``.

    Rows and columns run over ``m = j, j-1, ..., -j``.  The spin-``j``
    representation is the symmetric power of the 2x2 matrix ``[[a, b], [c, d]]``:
    a monomial ``u^(j+m) v^(j-m)`` maps under ``u -> a u + c v``,
    ``v -> b u + d v``.  For half-integer ``j`` the sign follows ``q``.
    """
    two_j = half(j).two_j
    if two_j < 0:
        raise ValueError("negative spin")
    q = np.asarray(q, dtype=float)
    U = su2_matrices(q)
    a, b, c, d = U[:, 0, 0], U[:, 0, 1], U[:, 1, 0], U[:, 1, 1]
    if two_j not in _TERMS:
        _TERMS[two_j] = _d_terms(two_j)
    powers = {}

    def pw(base, name, e):
        key = (name, e)
        if key not in powers:
            powers[key] = base**e
        return powers[key]

    D = np.zeros((q.shape[0], two_j + 1, two_j + 1), dtype=complex)
    for r, col, coeff, ea, ec, eb, ed in _TERMS[two_j]:
        D[:, r, col] += coeff * pw(a, "a", ea) * pw(c, "c", ec) * pw(b, "b", eb) * pw(d, "d", ed)
    return D


def wigner_d(j: SpinLike, R: Rotation) -> np.ndarray:
    """Wigner D matrix of a single rotation."""
    return wigner_d_batch(j, R.as_array()[None, :])[0]


def haar_quaternions(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` Haar-random unit quaternions: normalized 4-dimensional Gaussians."""
    g = rng.standard_normal((n, 4))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def haar_sample(rng: np.random.Generator) -> Rotation:
    return Rotation.from_array(haar_quaternions(rng, 1)[0])


def haar_samples(seed: int, n: int) -> list[Rotation]:
    logger.info("haar_samples seed=%d n=%d", seed, n)
    return [Rotation.from_array(q) for q in haar_quaternions(make_rng(seed), n)]

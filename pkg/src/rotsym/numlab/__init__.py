"""Floating-point cross-checks: rotations, Wigner D matrices and Monte-Carlo twirls."""

from .rotations import (
    Rotation,
    haar_quaternions,
    haar_sample,
    haar_samples,
    make_rng,
    su2_matrices,
    wigner_d,
    wigner_d_batch,
)
from .twirl import exact_twirl, invariance_residual, mc_twirl, pair_unitaries

__all__ = [name for name in dir() if not name.startswith("_")]

"""Invariant states of several spin pairs: sigma-PPT, classification and reductions."""

from .core import (
    Analysis,
    BinaryMask,
    MultiFidelity,
    Verdict,
    all_masks,
    analyze,
    apply_partial_transpose_family,
    as_mask,
    classify,
    extremal_separable_fidelities,
    reduce,
    sigma_ppt_transform,
    sigma_report,
    theorem_applies,
    thread_count,
)
from .dense import (
    dense_sigma_x,
    multi_density,
    multi_fidelities_float,
    multi_projector,
    partial_transpose_mask,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Rotationally invariant states of a single spin pair."""

from .pair import (
    SNAP_MAX_DENOMINATOR,
    SNAP_TOL,
    Family,
    FidelityVector,
    InexactFidelityVector,
    SpinPair,
    snap_fidelities,
    snap_rational,
)
from .separability import (
    NotPositive,
    Separability,
    decisive,
    is_ppt,
    partial_transpose_fidelities,
    ppt_transform,
    separability_check,
)
from .states import (
    CoupledVector,
    check_state,
    coupled_vector,
    density_from_fidelities,
    fidelities_from_density,
    intertwiner_v,
    partial_transpose,
    product_state,
    projector,
    raw_fidelities,
    schmidt_rank,
    twirl,
)
from .xmatrix import (
    MethodDisagreement,
    SnapError,
    UnsupportedClosedForm,
    XMatrix,
    XMethod,
    x_matrix,
    x_matrix_all,
    x_matrix_closed,
    x_matrix_closed_sixj,
    x_matrix_sixj,
    x_matrix_trace,
)

__all__ = [name for name in dir() if not name.startswith("_")]

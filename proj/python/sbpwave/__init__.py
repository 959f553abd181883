"""Energy-based SBP-SAT finite difference solvers for the second order wave equation."""

from ._core import (
    AssumptionViolation,
    Boundary,
    FastDiag,
    MeanConstraint,
    Operators,
    Semi1D,
    Semi2D,
    dirichlet1d,
    interface1d,
    interior_characteristic_roots,
    min_points,
    solve_augmented,
    wave2d,
)

__all__ = [
    "AssumptionViolation",
    "Boundary",
    "FastDiag",
    "MeanConstraint",
    "Operators",
    "Semi1D",
    "Semi2D",
    "dirichlet1d",
    "interface1d",
    "interior_characteristic_roots",
    "min_points",
    "solve_augmented",
    "wave2d",
]

"""Equilibria of thin self-gravitating toroidal strata."""

from ._core import (
    EquilibriumSolution,
    PeriodicSeries,
    ShapeState,
    SolverDiagnostics,
    TorusConfig,
    TorusError,
    analyze,
    apply_l,
    bracket_mean,
    canonical_integrals,
    differentiate,
    invert_l,
    k3_scalar,
    sobolev_norm,
    solve,
    theta_grid,
    validate,
)

__all__ = [
    "EquilibriumSolution",
    "PeriodicSeries",
    "ShapeState",
    "SolverDiagnostics",
    "TorusConfig",
    "TorusError",
    "analyze",
    "apply_l",
    "bracket_mean",
    "canonical_integrals",
    "differentiate",
    "invert_l",
    "k3_scalar",
    "sobolev_norm",
    "solve",
    "theta_grid",
    "validate",
]

"""Weak-coupling eigenvalue expansions for point-contact models."""

from ._core import (
    CoupledSystem,
    Error,
    Expansion,
    WeylModel,
    adjugate,
    block_det,
    char_fn,
    coeff_a,
    coeff_ab_scalar,
    det,
    evaluate_expansion,
    expansion,
    find_isolated_eigenvalue,
    fit_coefficients,
    geometric_grid,
    hermitian_sqrt,
    inverse,
    point_interaction,
    run_cli,
    scalar_rational,
    track_branch,
)

__all__ = [
    "CoupledSystem",
    "Error",
    "Expansion",
    "WeylModel",
    "adjugate",
    "block_det",
    "char_fn",
    "coeff_a",
    "coeff_ab_scalar",
    "det",
    "evaluate_expansion",
    "expansion",
    "find_isolated_eigenvalue",
    "fit_coefficients",
    "geometric_grid",
    "hermitian_sqrt",
    "inverse",
    "point_interaction",
    "run_cli",
    "scalar_rational",
    "track_branch",
]

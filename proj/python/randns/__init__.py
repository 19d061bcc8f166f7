"""Spectral toolkit for periodic Navier-Stokes with randomized rough initial data."""

from ._randns import (
    INTERPOLATION_CONSTANT,
    ConfigError,
    GridMismatch,
    GridSpec,
    NumericalFailure,
    SpectralField,
    abc_flow,
    exceedance,
    heat_flow,
    homogeneous_norm,
    interpolation_ratio,
    leray_project,
    lp_norm,
    mixed_norm,
    nonlinear_term,
    randomize,
    rough_datum,
    rough_decay,
    sobolev_norm,
    solve,
    taylor_green,
    validate_config,
)

__all__ = [
    "INTERPOLATION_CONSTANT",
    "ConfigError",
    "GridMismatch",
    "GridSpec",
    "NumericalFailure",
    "SpectralField",
    "abc_flow",
    "exceedance",
    "heat_flow",
    "homogeneous_norm",
    "interpolation_ratio",
    "leray_project",
    "lp_norm",
    "mixed_norm",
    "nonlinear_term",
    "randomize",
    "rough_datum",
    "rough_decay",
    "sobolev_norm",
    "solve",
    "taylor_green",
    "validate_config",
]

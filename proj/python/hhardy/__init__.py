"""Heisenberg group polar coordinates and Hardy-inequality checks."""

from ._core import (
    DomainError,
    NumericalError,
    cc_distance,
    cone_bounds,
    euclid_quotient,
    eval_weights,
    from_polar,
    invert_phi,
    koranyi,
    koranyi_upper_bound,
    mu,
    phi,
    radial_sequence_quotient,
    run_cli,
    sharpness,
    sl_perp_estimate,
    to_polar,
)

__all__ = [
    "DomainError",
    "NumericalError",
    "cc_distance",
    "cone_bounds",
    "euclid_quotient",
    "eval_weights",
    "from_polar",
    "invert_phi",
    "koranyi",
    "koranyi_upper_bound",
    "mu",
    "phi",
    "radial_sequence_quotient",
    "run_cli",
    "sharpness",
    "sl_perp_estimate",
    "to_polar",
]

"""Blind ptychography: amplitude losses, Wirtinger gradients, solvers and checkers."""

from ._core import (
    ConfigError,
    Problem,
    bounds,
    dft,
    fd_gradient,
    fit_decay_slope,
    forward_intensities,
    gradient,
    gradient_region,
    idft,
    initial_guess,
    loss,
    loss_region,
    reconstruction_error,
    run,
    shift,
    verify,
)

__all__ = [
    "ConfigError",
    "Problem",
    "bounds",
    "dft",
    "fd_gradient",
    "fit_decay_slope",
    "forward_intensities",
    "gradient",
    "gradient_region",
    "idft",
    "initial_guess",
    "loss",
    "loss_region",
    "reconstruction_error",
    "run",
    "shift",
    "verify",
]

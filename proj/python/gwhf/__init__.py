"""Zeros of Gaussian Weyl-Heisenberg functions.

Thin Python layer over the C++ core: window and kernel formulas, field
simulation, charged-zero detection and Monte Carlo reports.
"""

from ._core import (
    ConfigError,
    DecayViolation,
    DomainError,
    Error,
    Field,
    InvalidKernel,
    InvalidWindow,
    Kernel,
    KernelJet,
    ResolutionError,
    UncertaintyConstants,
    Window,
    default_seed,
    gef_field,
    monte_carlo,
    polyentire_field,
    rho1_charged,
    stft_field,
)

__all__ = [
    "ConfigError",
    "DecayViolation",
    "DomainError",
    "Error",
    "Field",
    "InvalidKernel",
    "InvalidWindow",
    "Kernel",
    "KernelJet",
    "ResolutionError",
    "UncertaintyConstants",
    "Window",
    "default_seed",
    "gef_field",
    "monte_carlo",
    "polyentire_field",
    "rho1_charged",
    "stft_field",
]

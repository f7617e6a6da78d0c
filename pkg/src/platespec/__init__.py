"""Pseudo-spectral simulation and decay-rate verification for a
quasi-linear dissipative plate equation with rotational inertia."""

from .grid import (
    GridSpec,
    SpectralField,
    forward_transform,
    inverse_transform,
    spectral_derivative,
    sobolev_norm,
    lp_norm,
    dealias,
)

__all__ = [
    "GridSpec",
    "SpectralField",
    "forward_transform",
    "inverse_transform",
    "spectral_derivative",
    "sobolev_norm",
    "lp_norm",
    "dealias",
]

__version__ = "0.1.0"

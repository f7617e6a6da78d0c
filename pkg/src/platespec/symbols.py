"""Closed-form spectral theory of the linearized plate flow.

Per wavevector xi the linearization reduces to the damped mode equation

    (1 + |xi|^2) v'' + v' + q(xi) v = 0,      q(xi) = gamma(omega) |xi|^4,

whose roots lam_pm feed the two fundamental multiplier symbols G_hat, H_hat
propagating (u0 + u1) and u0.  All symbols are real-valued even functions of
xi, so multiplier application preserves real physical fields.
"""

from functools import cached_property

import numpy as np

from .grid import GridSpec, SpectralField
from .materials import MaterialModel

DEGENERATE_TOL = 1e-8


def eigenvalues_from_form(xi_squared, quartic):
    """Both roots of (1+|xi|^2) lam^2 + lam + q = 0, larger real part first."""
    xi_squared = np.asarray(xi_squared, dtype=float)
    quartic = np.asarray(quartic, dtype=float)
    a = 1.0 + xi_squared
    disc = 1.0 - 4.0 * quartic * a
    root = np.sqrt(disc.astype(complex))
    lam_plus = (-1.0 + root) / (2.0 * a)
    lam_minus = (-1.0 - root) / (2.0 * a)
    return lam_plus, lam_minus


def eigenvalues(xi, gamma: float):
    """Roots at a single wavevector xi with directional coefficient gamma."""
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    xi_sq = float(np.sum(xi**2))
    lam_p, lam_m = eigenvalues_from_form(xi_sq, gamma * xi_sq**2)
    return complex(lam_p), complex(lam_m)


def _propagator_values(lam_plus, lam_minus, t: float):
    """(G, H, dG/dt, dH/dt) symbol values; degenerate pairs use the
    confluent limit of the divided difference (removable singularity)."""
    diff = lam_plus - lam_minus
    deg = np.abs(diff) < DEGENERATE_TOL
    safe = np.where(deg, 1.0, diff)
    ep = np.exp(lam_plus * t)
    em = np.exp(lam_minus * t)
    g = (ep - em) / safe
    h = ((1.0 + lam_plus) * em - (1.0 + lam_minus) * ep) / safe
    gd = (lam_plus * ep - lam_minus * em) / safe
    hd = ((1.0 + lam_plus) * lam_minus * em - (1.0 + lam_minus) * lam_plus * ep) / safe
    if np.any(deg):
        lam = 0.5 * (lam_plus + lam_minus)
        el = np.exp(lam * t)
        g = np.where(deg, t * el, g)
        h = np.where(deg, el * (1.0 - (1.0 + lam) * t), h)
        gd = np.where(deg, el * (1.0 + lam * t), gd)
        hd = np.where(deg, -el * (1.0 + lam * (1.0 + lam) * t), hd)
    return g.real, h.real, gd.real, hd.real


def propagator_symbols_from_form(xi_squared, quartic, t: float):
    """G_hat, H_hat on arbitrary arrays of |xi|^2 and gamma*|xi|^4."""
    lam_p, lam_m = eigenvalues_from_form(xi_squared, quartic)
    g, h, _, _ = _propagator_values(lam_p, lam_m, t)
    return g, h


def quartic_form_on_grid(grid: GridSpec, model: MaterialModel) -> np.ndarray:
    """q(xi) = sum b_deriv(O)[i,j,a,b] xi_i xi_j xi_a xi_b on the lattice."""
    b0 = model.flux_derivative_at_zero
    k = grid.wavenumbers
    return np.einsum("ijab,i...,j...,a...,b...->...", b0, k, k, k, k)


class SymbolTable:
    """Eigenvalues and propagator symbols of the linearized flow on a lattice.

    Immutable after construction; all applications are elementwise.
    """

    def __init__(self, grid: GridSpec, quartic: np.ndarray):
        self.grid = grid
        self.quartic = np.asarray(quartic, dtype=float)
        if self.quartic.shape != grid.shape:
            raise ValueError("quartic form shape does not match grid")
        self.xi_squared = grid.xi_squared
        self.lambda_plus, self.lambda_minus = eigenvalues_from_form(
            self.xi_squared, self.quartic
        )

    @classmethod
    def from_model(cls, grid: GridSpec, model: MaterialModel) -> "SymbolTable":
        return cls(grid, quartic_form_on_grid(grid, model))

    @classmethod
    def from_gamma(cls, grid: GridSpec, gamma: float = 1.0) -> "SymbolTable":
        if not gamma > 0:
            raise ValueError("gamma must be positive")
        return cls(grid, gamma * grid.xi_squared**2)

    @cached_property
    def gamma_at_xi(self) -> np.ndarray:
        """Directional coefficient per lattice point; the undefined 0-mode is
        forced to 1 (its symbol exponent is 0 regardless)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.where(self.xi_squared > 0, self.quartic / self.xi_squared**2, 1.0)
        return g

    def characteristic_residual(self) -> np.ndarray:
        lam = self.lambda_plus
        res_p = np.abs((1.0 + self.xi_squared) * lam**2 + lam + self.quartic)
        lam = self.lambda_minus
        res_m = np.abs((1.0 + self.xi_squared) * lam**2 + lam + self.quartic)
        return np.maximum(res_p, res_m)

    def propagator_symbols(self, t: float):
        """(G_hat, H_hat) at time t >= 0."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        g, h, _, _ = _propagator_values(self.lambda_plus, self.lambda_minus, t)
        return g, h

    def propagator_symbols_full(self, t: float):
        """(G_hat, H_hat, dG_hat, dH_hat) at time t (t may be negative for
        reversal experiments)."""
        return _propagator_values(self.lambda_plus, self.lambda_minus, t)

    def apply_linear_solution(
        self, u0: SpectralField, u1: SpectralField, t: float
    ) -> SpectralField:
        """G(t)*(u0+u1) + H(t)*u0 exactly, by spectral multiplication."""
        self._check(u0, u1)
        g, h, _, _ = self.propagator_symbols_full(t)
        return SpectralField(self.grid, g * (u0.coeffs + u1.coeffs) + h * u0.coeffs)

    def apply_linear_pair(self, u0: SpectralField, u1: SpectralField, t: float):
        """(u(t), u_t(t)) of the linearized flow."""
        self._check(u0, u1)
        g, h, gd, hd = self.propagator_symbols_full(t)
        s = u0.coeffs + u1.coeffs
        return (
            SpectralField(self.grid, g * s + h * u0.coeffs),
            SpectralField(self.grid, gd * s + hd * u0.coeffs),
        )

    def apply_smoothing_propagator(self, phi: SpectralField, t: float) -> SpectralField:
        """G(t) * (1 - Laplacian)^{-1} phi."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        if phi.grid != self.grid:
            raise ValueError("field grid does not match table")
        g, _ = self.propagator_symbols(t)
        return SpectralField(self.grid, g / (1.0 + self.xi_squared) * phi.coeffs)

    def g0_hat(self, t: float) -> np.ndarray:
        """Symbol of the fourth-order parabolic limit kernel, exp(-q(xi) t)."""
        if t < 0:
            raise ValueError("t must be nonnegative")
        return np.exp(-self.quartic * t)

    def apply_g0(self, phi: SpectralField, t: float) -> SpectralField:
        if phi.grid != self.grid:
            raise ValueError("field grid does not match table")
        return SpectralField(self.grid, self.g0_hat(t) * phi.coeffs)

    def _check(self, u0: SpectralField, u1: SpectralField):
        if u0.grid != self.grid or u1.grid != self.grid:
            raise ValueError("field grids do not match table")


def g0_symbol(xi, gamma: float, t: float) -> float:
    """exp(-gamma(omega) |xi|^4 t) at one wavevector; 1 at xi = 0."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    xi_sq = float(np.sum(xi**2))
    if xi_sq == 0.0:
        return 1.0
    return float(np.exp(-gamma * xi_sq**2 * t))


# ---------------------------------------------------------------------------
# Decay-envelope diagnostics
# ---------------------------------------------------------------------------

def real_part_upper(radii, gamma: float = 1.0) -> np.ndarray:
    """Re lam_plus along a radial ray."""
    r = np.asarray(radii, dtype=float)
    lam_p, _ = eigenvalues_from_form(r**2, gamma * r**4)
    return lam_p.real


def envelope_bound(radii, c: float = 1.0) -> np.ndarray:
    """The regularity-loss envelope -c |xi|^4 / (1+|xi|^2)^3."""
    r = np.asarray(radii, dtype=float)
    return -c * r**4 / (1.0 + r**2) ** 3


def fit_envelope_constant(radii, gamma: float = 1.0) -> float:
    """Largest c with Re lam_plus <= -c |xi|^4/(1+|xi|^2)^3 on the sample."""
    r = np.asarray(radii, dtype=float)
    re = real_part_upper(r, gamma)
    ratio = -re * (1.0 + r**2) ** 3 / r**4
    return float(np.min(ratio))


def high_frequency_gap(radii, gamma: float = 1.0) -> np.ndarray:
    """|Re lam_plus| on circles |xi| = R: tends to 0, no uniform spectral gap."""
    return np.abs(real_part_upper(radii, gamma))

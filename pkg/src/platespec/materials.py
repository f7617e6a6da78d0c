"""Material nonlinearity: free-energy potential, stress fluxes, structural checks.

A model carries the potential phi(V) on symmetric matrices V, the flux
matrix b(V) = d phi / d V, its derivative tensor b_deriv(V) and the
quadratic-remainder residual g(V) = b(V) - b_deriv(O):V.  Flux derivatives
follow the symmetric-matrix convention: directional derivatives are taken
along the symmetric basis E_ab = (e_a e_b^T + e_b e_a^T)/2.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .errors import BoundViolationError, StructuralViolationError
from .grid import SpectralField, dealias, forward_transform, hessian_samples

FD_STEP = 1e-5


@dataclass(frozen=True)
class MaterialModel:
    """Nonlinearity of the plate flux, immutable after construction.

    phi and flux must be vectorized: they accept V of shape (n, n, ...) and
    return shapes (...) and (n, n, ...).  flux_derivative, when supplied,
    takes one (n, n) matrix and returns the (n, n, n, n) derivative tensor;
    when omitted it is approximated by central finite differences of flux.
    """

    name: str
    dim: int
    phi: Callable[[np.ndarray], np.ndarray]
    flux: Callable[[np.ndarray], np.ndarray]
    flux_derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    linear: bool = False
    params: dict = field(default_factory=dict)

    @cached_property
    def flux_derivative_at_zero(self) -> np.ndarray:
        return flux_derivative_at(self, np.zeros((self.dim, self.dim)))

    def residual(self, V: np.ndarray) -> np.ndarray:
        """g(V) = b(V) - b_deriv(O):V, the quadratic-and-higher remainder."""
        if self.linear:
            return np.zeros_like(V)
        b0 = self.flux_derivative_at_zero
        return self.flux(V) - np.einsum("ijab,ab...->ij...", b0, V)


def _sym_basis(n: int, a: int, b: int) -> np.ndarray:
    e = np.zeros((n, n))
    e[a, b] += 0.5
    e[b, a] += 0.5
    return e


def flux_derivative_at(model: MaterialModel, V: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """Derivative tensor at a single matrix V, analytic when available."""
    if model.flux_derivative is not None:
        return np.asarray(model.flux_derivative(V))
    return finite_difference_flux_derivative(model, V, step)


def finite_difference_flux_derivative(
    model: MaterialModel, V: np.ndarray, step: float = FD_STEP
) -> np.ndarray:
    n = model.dim
    out = np.empty((n, n, n, n))
    for a in range(n):
        for b in range(a, n):
            e = _sym_basis(n, a, b)
            diff = (model.flux(V + step * e) - model.flux(V - step * e)) / (2 * step)
            out[:, :, a, b] = diff
            out[:, :, b, a] = diff
    return out


def finite_difference_potential_gradient(
    model: MaterialModel, V: np.ndarray, step: float = 1e-6
) -> np.ndarray:
    n = model.dim
    out = np.empty((n, n))
    for a in range(n):
        for b in range(a, n):
            e = _sym_basis(n, a, b)
            d = (model.phi(V + step * e) - model.phi(V - step * e)) / (2 * step)
            out[a, b] = d
            out[b, a] = d
    return out


# ---------------------------------------------------------------------------
# Built-in model library
# ---------------------------------------------------------------------------

def _sym_identity(n: int) -> np.ndarray:
    eye = np.eye(n)
    return 0.5 * (
        np.einsum("ia,jb->ijab", eye, eye) + np.einsum("ib,ja->ijab", eye, eye)
    )


def isotropic_linear_model(dim: int) -> MaterialModel:
    """phi = |V|^2/2: the linear isotropic case, biharmonic limit operator."""
    ident = _sym_identity(dim)
    return MaterialModel(
        name="linear_isotropic",
        dim=dim,
        phi=lambda V: 0.5 * np.sum(V * V, axis=(0, 1)),
        flux=lambda V: np.array(V, copy=True),
        flux_derivative=lambda V: ident.copy(),
        linear=True,
    )


def quartic_isotropic_model(dim: int) -> MaterialModel:
    """phi = |V|^2/2 + |V|^4/4, flux (1+|V|^2)V, cubic residual |V|^2 V."""
    ident = _sym_identity(dim)

    def phi(V):
        sq = np.sum(V * V, axis=(0, 1))
        return 0.5 * sq + 0.25 * sq**2

    def flux(V):
        sq = np.sum(V * V, axis=(0, 1))
        return (1.0 + sq) * V

    def flux_derivative(V):
        sq = float(np.sum(V * V))
        return (1.0 + sq) * ident + 2.0 * np.einsum("ij,ab->ijab", V, V)

    return MaterialModel(
        name="quartic_isotropic",
        dim=dim,
        phi=phi,
        flux=flux,
        flux_derivative=flux_derivative,
    )


def anisotropic_linear_model(dim: int, strength: float = 1.0) -> MaterialModel:
    """Quadratic perturbation phi = |V|^2/2 + c V_11^2/2, direction-dependent
    quartic symbol 1 + c w_1^4."""
    ident = _sym_identity(dim)
    extra = np.zeros((dim, dim, dim, dim))
    extra[0, 0, 0, 0] = strength

    def phi(V):
        return 0.5 * np.sum(V * V, axis=(0, 1)) + 0.5 * strength * V[0, 0] ** 2

    def flux(V):
        out = np.array(V, copy=True)
        out[0, 0] = out[0, 0] + strength * V[0, 0]
        return out

    return MaterialModel(
        name="anisotropic_linear",
        dim=dim,
        phi=phi,
        flux=flux,
        flux_derivative=lambda V: ident + extra,
        linear=True,
        params={"strength": strength},
    )


def gamma_violating_model(dim: int) -> MaterialModel:
    """phi = -|V|^2/2: negative-definite flux derivative, for failure paths."""
    ident = _sym_identity(dim)
    return MaterialModel(
        name="gamma_violating",
        dim=dim,
        phi=lambda V: -0.5 * np.sum(V * V, axis=(0, 1)),
        flux=lambda V: -np.array(V, copy=True),
        flux_derivative=lambda V: -ident,
        linear=True,
    )


MODEL_REGISTRY = {
    "linear_isotropic": isotropic_linear_model,
    "quartic_isotropic": quartic_isotropic_model,
    "anisotropic_linear": anisotropic_linear_model,
    "gamma_violating": gamma_violating_model,
}


def make_model(name: str, dim: int, params: Optional[dict] = None) -> MaterialModel:
    if name not in MODEL_REGISTRY:
        raise ValueError(f"unknown model {name!r}; known: {sorted(MODEL_REGISTRY)}")
    return MODEL_REGISTRY[name](dim, **(params or {}))


# ---------------------------------------------------------------------------
# Directional ellipticity
# ---------------------------------------------------------------------------

def gamma_of_direction(model: MaterialModel, omega: np.ndarray) -> float:
    """Quartic directional symbol of the linearized flux at the unit vector omega."""
    omega = np.asarray(omega, dtype=float)
    if omega.shape != (model.dim,):
        raise ValueError(f"direction must have shape ({model.dim},)")
    if abs(np.linalg.norm(omega) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector to 1e-12")
    return quartic_form(model.flux_derivative_at_zero, omega)


def quartic_form(tensor: np.ndarray, omega: np.ndarray) -> float:
    return float(np.einsum("ijab,i,j,a,b->", tensor, omega, omega, omega, omega))


def _sphere_sample(dim: int, samples: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    # Fibonacci lattice on S^2
    i = np.arange(samples) + 0.5
    phi = np.arccos(1 - 2 * i / samples)
    theta = np.pi * (1 + 5**0.5) * i
    return np.stack(
        [np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi)], axis=1
    )


def gamma_min(model: MaterialModel, samples: int = 512) -> float:
    """Minimum of the quartic symbol over the unit sphere.

    Quasi-uniform sampling plus one local refinement pass; a nonpositive
    minimum rejects the model.
    """
    if samples < 100:
        raise ValueError("need at least 100 sphere samples")
    b0 = model.flux_derivative_at_zero
    points = _sphere_sample(model.dim, samples)
    values = np.einsum("ijab,si,sj,sa,sb->s", b0, points, points, points, points)
    best = int(np.argmin(values))
    minimum = float(values[best])

    if model.dim > 1:
        def objective(angles):
            if model.dim == 2:
                w = np.array([np.cos(angles[0]), np.sin(angles[0])])
            else:
                w = np.array(
                    [
                        np.sin(angles[1]) * np.cos(angles[0]),
                        np.sin(angles[1]) * np.sin(angles[0]),
                        np.cos(angles[1]),
                    ]
                )
            return quartic_form(b0, w)

        w0 = points[best]
        if model.dim == 2:
            x0 = [np.arctan2(w0[1], w0[0])]
        else:
            x0 = [np.arctan2(w0[1], w0[0]), np.arccos(np.clip(w0[2], -1, 1))]
        result = optimize.minimize(objective, x0, method="Nelder-Mead")
        minimum = min(minimum, float(result.fun))

    if minimum <= 0:
        raise StructuralViolationError(
            f"model {model.name!r}: quartic symbol has nonpositive minimum {minimum:.6g}"
        )
    return minimum


# ---------------------------------------------------------------------------
# Structure validation
# ---------------------------------------------------------------------------

@dataclass
class StructureReport:
    model_name: str
    phi_at_zero: float
    flux_at_zero_max: float
    normalization_ok: bool
    symmetry_residual: float
    symmetry_ok: bool
    gradient_residual: float
    gradient_ok: bool
    remainder_ratio: float
    remainder_ok: bool
    gamma_min: float
    ellipticity_constant: float
    ellipticity_ok: bool

    @property
    def passed(self) -> bool:
        return (
            self.normalization_ok
            and self.symmetry_ok
            and self.gradient_ok
            and self.remainder_ok
            and self.ellipticity_ok
        )

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def _random_symmetric(rng, n: int, scale: float) -> np.ndarray:
    a = rng.standard_normal((n, n))
    return scale * (a + a.T) / 2


def validate_structure(model: MaterialModel, tol: float = 1e-6) -> StructureReport:
    """Check normalization, flux symmetry, gradient consistency, remainder
    size and directional ellipticity; returns a report with pass/fail flags."""
    n = model.dim
    zero = np.zeros((n, n))
    phi0 = float(model.phi(zero))
    flux0 = float(np.max(np.abs(model.flux(zero))))
    normalization_ok = abs(phi0) <= tol and flux0 <= tol

    rng = np.random.default_rng(0)
    sym_res = 0.0
    grad_res = 0.0
    for scale in (0.05, 0.02, 0.01):
        V = _random_symmetric(rng, n, scale)
        B = flux_derivative_at(model, V)
        sym_res = max(
            sym_res,
            float(np.max(np.abs(B - np.swapaxes(B, 0, 1)))),
            float(np.max(np.abs(B - np.swapaxes(B, 2, 3)))),
            float(np.max(np.abs(B - np.transpose(B, (2, 3, 0, 1))))),
        )
        if model.flux_derivative is not None:
            fd = finite_difference_flux_derivative(model, V)
            sym_res = max(sym_res, float(np.max(np.abs(B - fd))))
        grad = finite_difference_potential_gradient(model, V)
        grad_res = max(grad_res, float(np.max(np.abs(grad - model.flux(V)))))

    # g = O(|V|^2) iff the ratio ||g||/||V||^2 stays bounded on shrinking
    # samples; a linear defect in g makes it grow like 1/scale.
    ratios = []
    for scale in (0.1, 0.03, 0.01, 0.003):
        V = _random_symmetric(rng, n, scale)
        norm_v = np.linalg.norm(V)
        ratios.append(float(np.linalg.norm(model.residual(V))) / norm_v**2)
    remainder_ratio = max(ratios)
    remainder_ok = ratios[-1] <= 1.5 * ratios[0] + 1e-9

    try:
        gmin = gamma_min(model)
        elliptic_ok = True
    except StructuralViolationError:
        points = _sphere_sample(n, 256)
        b0 = model.flux_derivative_at_zero
        gmin = float(
            np.min(np.einsum("ijab,si,sj,sa,sb->s", b0, points, points, points, points))
        )
        elliptic_ok = False

    return StructureReport(
        model_name=model.name,
        phi_at_zero=phi0,
        flux_at_zero_max=flux0,
        normalization_ok=normalization_ok,
        symmetry_residual=sym_res,
        symmetry_ok=sym_res <= tol,
        gradient_residual=grad_res,
        gradient_ok=grad_res <= max(tol, 1e-7),
        remainder_ratio=remainder_ratio,
        remainder_ok=remainder_ok,
        gamma_min=gmin,
        ellipticity_constant=gmin,
        ellipticity_ok=elliptic_ok,
    )


# ---------------------------------------------------------------------------
# Pseudo-spectral nonlinear term
# ---------------------------------------------------------------------------

def evaluate_nonlinear_term(
    model: MaterialModel,
    u: SpectralField,
    full_flux: bool = False,
    dealias_fraction: float = 2.0 / 3.0,
    hessian_bound: float = 0.1,
    time: Optional[float] = None,
) -> SpectralField:
    """Sum_ij d_i d_j [g^ij(Hessian u)] computed pseudospectrally.

    full_flux swaps the residual g for the full flux b (non-split form).
    Raises BoundViolationError when the grid sup-norm of the Hessian exceeds
    hessian_bound.
    """
    g = u.grid
    if model.dim != g.dim:
        raise ValueError("model dimension does not match grid")
    V = hessian_samples(u)
    max_hess = float(np.max(np.abs(V)))
    if max_hess > hessian_bound:
        raise BoundViolationError(
            f"Hessian sup-norm {max_hess:.4g} exceeds ceiling {hessian_bound:.4g}",
            time=time,
            value=max_hess,
        )
    if not full_flux and model.linear:
        return SpectralField(g, np.zeros(g.shape, dtype=complex))

    W = model.flux(V) if full_flux else model.residual(V)
    out = np.zeros(g.shape, dtype=complex)
    for i in range(g.dim):
        for j in range(i, g.dim):
            w_hat = forward_transform(W[i, j], g).coeffs
            mult = -g.wavenumbers[i] * g.wavenumbers[j]
            out += (mult if i == j else 2.0 * mult) * w_hat
    return dealias(SpectralField(g, out), dealias_fraction)


def max_hessian(u: SpectralField) -> float:
    """Grid sup-norm of the Hessian entries."""
    return float(np.max(np.abs(hessian_samples(u))))

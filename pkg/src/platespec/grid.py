"""Periodic lattice, discrete Fourier transform, spectral differentiation, norms.

Fields live on the box [-L, L)^dim with N points per axis.  Spectral
coefficients follow the continuum convention

    f_hat(xi) = integral exp(-i x.xi) f(x) dx,

approximated by the lattice quadrature (cell-volume weighting included), so
L^1/L^2 values of compactly supported data match their whole-space analytic
values.  Coefficients are stored in numpy fft layout on the wavenumber
lattice {pi*m/L : -N/2 <= m < N/2}.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic lattice description.

    Attributes
    ----------
    dim : int
        Spatial dimension, 1, 2 or 3.
    half_length : float
        Half box size L; the domain is [-L, L) per axis.
    points_per_axis : int
        Even number of points per axis (N >= 4).
    """

    dim: int
    half_length: float
    points_per_axis: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if not self.half_length > 0:
            raise ValueError(f"half_length must be positive, got {self.half_length}")
        n = self.points_per_axis
        if n < 4 or n % 2 != 0:
            raise ValueError(f"points_per_axis must be even and >= 4, got {n}")

    @cached_property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dim

    @cached_property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.points_per_axis

    @cached_property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @cached_property
    def axis_coords(self) -> np.ndarray:
        return -self.half_length + self.spacing * np.arange(self.points_per_axis)

    @cached_property
    def coords(self) -> np.ndarray:
        """Physical coordinates, shape (dim, N, ..., N)."""
        axes = np.meshgrid(*([self.axis_coords] * self.dim), indexing="ij")
        return np.stack(axes)

    @cached_property
    def mode_numbers(self) -> np.ndarray:
        """Integer mode indices m per axis, shape (dim, N, ..., N)."""
        m1 = np.rint(np.fft.fftfreq(self.points_per_axis) * self.points_per_axis).astype(int)
        axes = np.meshgrid(*([m1] * self.dim), indexing="ij")
        return np.stack(axes)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Wavenumbers xi = pi*m/L per axis, shape (dim, N, ..., N)."""
        return self.mode_numbers * (np.pi / self.half_length)

    @cached_property
    def xi_squared(self) -> np.ndarray:
        return np.sum(self.wavenumbers**2, axis=0)

    @cached_property
    def spectral_weight(self) -> float:
        """Plancherel weight (2 pi)^(-dim) * (delta xi)^dim for coefficient sums."""
        return (np.pi / self.half_length) ** self.dim / (2.0 * np.pi) ** self.dim

    @cached_property
    def _phase(self) -> np.ndarray:
        # (-1)^m per axis: shifts the sample origin from index 0 to x = -L.
        return np.where(np.sum(self.mode_numbers & 1, axis=0) % 2 == 0, 1.0, -1.0)

    def dealias_mask(self, fraction: float) -> np.ndarray:
        """Boolean mask keeping modes with every |m_i| < fraction*N/2.

        fraction = 1 keeps the whole lattice (including the Nyquist plane,
        which sits exactly on the |m| = N/2 boundary).
        """
        if not 0.0 < fraction <= 1.0:
            raise ValueError(f"dealias fraction must be in (0, 1], got {fraction}")
        if fraction == 1.0:
            return np.ones(self.shape, dtype=bool)
        cutoff = fraction * self.points_per_axis / 2.0
        return np.all(np.abs(self.mode_numbers) < cutoff, axis=0)

    @cached_property
    def validity_window(self) -> float:
        """Horizon (L/pi)^4 below which mode spacing does not contaminate
        fourth-order parabolic spreading rates."""
        return (self.half_length / np.pi) ** 4


@dataclass(frozen=True)
class SpectralField:
    """Complex Fourier coefficients of a real scalar field on the lattice."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != self.grid.shape:
            raise ValueError(
                f"coefficient shape {self.coeffs.shape} does not match grid {self.grid.shape}"
            )

    def __add__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        _check_same_grid(self, other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy())


def _check_same_grid(a: SpectralField, b: SpectralField):
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


def zero_field(grid: GridSpec) -> SpectralField:
    return SpectralField(grid, np.zeros(grid.shape, dtype=complex))


def forward_transform(samples: np.ndarray, grid: GridSpec) -> SpectralField:
    """Transform physical samples to continuum-normalized coefficients."""
    samples = np.asarray(samples)
    if samples.shape != grid.shape:
        raise ValueError(
            f"sample shape {samples.shape} does not match grid {grid.shape}"
        )
    coeffs = grid.cell_volume * grid._phase * np.fft.fftn(samples)
    return SpectralField(grid, coeffs)


def inverse_transform(field: SpectralField) -> np.ndarray:
    """Synthesize real physical samples from coefficients."""
    g = field.grid
    return np.fft.ifftn(field.coeffs * g._phase).real / g.cell_volume


def field_from_function(grid: GridSpec, fn) -> SpectralField:
    """Sample fn(x) on the lattice and transform; fn takes (dim, ...) coords."""
    return forward_transform(fn(grid.coords), grid)


def spectral_derivative(field: SpectralField, multi_index) -> SpectralField:
    """Multiply coefficients by prod (i xi_j)^(k_j).

    For odd derivative orders the unpaired Nyquist plane along that axis is
    zeroed so Hermitian symmetry (real physical fields) is preserved.
    """
    g = field.grid
    multi_index = tuple(int(k) for k in multi_index)
    if len(multi_index) != g.dim:
        raise ValueError(f"multi_index length {len(multi_index)} != dim {g.dim}")
    if any(k < 0 for k in multi_index):
        raise ValueError("derivative orders must be nonnegative")
    coeffs = field.coeffs.copy()
    nyq = -g.points_per_axis // 2
    for axis, k in enumerate(multi_index):
        if k == 0:
            continue
        coeffs *= (1j * g.wavenumbers[axis]) ** k
        if k % 2 == 1:
            coeffs[_axis_slice(g, axis, nyq)] = 0.0
    return SpectralField(g, coeffs)


def _axis_slice(grid: GridSpec, axis: int, mode: int):
    idx = [slice(None)] * grid.dim
    idx[axis] = mode % grid.points_per_axis
    return tuple(idx)


def laplacian(field: SpectralField) -> SpectralField:
    return SpectralField(field.grid, -field.grid.xi_squared * field.coeffs)


def sobolev_norm(field: SpectralField, s: int) -> float:
    """Plancherel evaluation of the order-s Sobolev norm.

    Homogeneous pieces are regrouped isotropically: the k-th term is
    || |xi|^k f_hat ||^2, summed for k = 0..s.
    """
    if s < 0:
        raise ValueError("Sobolev order must be nonnegative")
    g = field.grid
    power = np.abs(field.coeffs) ** 2
    xi2 = g.xi_squared
    factor = np.ones_like(xi2)
    total = power.sum()
    acc = total
    for _ in range(int(s)):
        factor = factor * xi2
        acc += (factor * power).sum()
    return float(np.sqrt(g.spectral_weight * acc))


def weighted_sobolev_norm(field: SpectralField, order: int, s: int) -> float:
    """|| d^order f ||_{H^s} with isotropic |xi|^order weighting."""
    g = field.grid
    base = np.abs(field.coeffs) ** 2 * g.xi_squared ** int(order)
    xi2 = g.xi_squared
    acc = base.sum()
    factor = np.ones_like(xi2)
    for _ in range(int(s)):
        factor = factor * xi2
        acc += (factor * base).sum()
    return float(np.sqrt(g.spectral_weight * acc))


def l2_norm(field: SpectralField) -> float:
    return sobolev_norm(field, 0)


def lp_norm(field: SpectralField, p, weighted: bool = False) -> float:
    """Physical-space L^1, weighted L^1 (gamma = 1) or grid-max L^inf norm."""
    samples = inverse_transform(field)
    g = field.grid
    if p in (np.inf, "inf", "Linf"):
        if weighted:
            raise ValueError("weighted norm is defined for p = 1 only")
        return float(np.max(np.abs(samples)))
    if p == 1:
        absval = np.abs(samples)
        if weighted:
            radius = np.sqrt(np.sum(g.coords**2, axis=0))
            absval = (1.0 + radius) * absval
        return float(g.cell_volume * absval.sum())
    raise ValueError(f"unsupported p: {p!r} (use 1 or inf)")


def dealias(field: SpectralField, fraction: float) -> SpectralField:
    """Zero every coefficient with any |m_i| >= fraction*N/2."""
    mask = field.grid.dealias_mask(fraction)
    return SpectralField(field.grid, np.where(mask, field.coeffs, 0.0))


def hessian_samples(field: SpectralField) -> np.ndarray:
    """Physical samples of all second derivatives, shape (dim, dim, ...)."""
    g = field.grid
    out = np.empty((g.dim, g.dim) + g.shape)
    for i in range(g.dim):
        for j in range(i, g.dim):
            mult = -g.wavenumbers[i] * g.wavenumbers[j]
            deriv = SpectralField(g, mult * field.coeffs)
            out[i, j] = inverse_transform(deriv)
            if i != j:
                out[j, i] = out[i, j]
    return out


def max_derivative_inf(field: SpectralField, order: int) -> float:
    """Grid L^inf of the largest |d^alpha f| over multi-indices |alpha| = order."""
    g = field.grid
    best = 0.0
    for alpha in _multi_indices(g.dim, order):
        value = float(np.max(np.abs(inverse_transform(spectral_derivative(field, alpha)))))
        best = max(best, value)
    return best


def _multi_indices(dim: int, order: int):
    if dim == 1:
        yield (order,)
        return
    for head in range(order + 1):
        for rest in _multi_indices(dim - 1, order - head):
            yield (head,) + rest

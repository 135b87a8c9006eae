"""Closed-form solitary waves, their norm identities and endpoint scans.

The traveling waves are e^{i omega t} phi(x - c t) with a two-parameter
profile family phi = phi_{omega, c}; admissibility is c^2 < 4 omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import ComplexField, GridSpec
from .quadrature import integrate_halfline, cumulative_integral
from .spectral import l2_norm, sobolev_norm, spatial_derivative

_ENDPOINT_MARGIN = 1e-6  # largest allowed c/(2 sqrt(omega)) for the I(c) integrals


@dataclass(frozen=True)
class SolitonParams:
    """(omega, c, sigma) with c^2 < 4 omega."""

    omega: float
    c: float
    sigma: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.c**2 < 4.0 * self.omega:
            raise ValueError(
                f"need c^2 < 4*omega (speed {self.c} vs omega {self.omega})"
            )

    @property
    def alpha(self) -> float:
        return math.sqrt(4.0 * self.omega - self.c**2)

    @property
    def s_c(self) -> float:
        return 0.5 - 0.5 / self.sigma

    @property
    def p_c(self) -> float:
        return 2.0 * self.sigma

    @property
    def speed_ratio(self) -> float:
        """c / (2 sqrt(omega)), in (-1, 1)."""
        return self.c / (2.0 * math.sqrt(self.omega))


@dataclass(frozen=True)
class CaseTwoParams:
    """Near-endpoint parametrization c = -2 z sqrt(omega), z in (z0, 1)."""

    z: float
    z0: float = 0.99
    a0: float = field(default=0.0)  # frequency cutoff multiplier; 0 = measure it

    def __post_init__(self):
        if not 0 < self.z0 < 1:
            raise ValueError(f"z0 must lie in (0, 1), got {self.z0}")
        if not self.z0 < self.z < 1:
            raise ValueError(f"z must lie in ({self.z0}, 1), got {self.z}")


def amplitude(p: SolitonParams, x) -> np.ndarray:
    """Positive profile ((sigma+1)(4w-c^2) / (2 sqrt(w) cosh(sigma alpha x) - c))^(1/(2 sigma))."""
    x = np.asarray(x, dtype=float)
    num = (p.sigma + 1.0) * (4.0 * p.omega - p.c**2)
    with np.errstate(over="ignore"):
        den = 2.0 * math.sqrt(p.omega) * np.cosh(p.sigma * p.alpha * x) - p.c
    return (num / den) ** (1.0 / (2.0 * p.sigma))


def soliton_grid(p: SolitonParams, h_target: float = 0.5,
                 min_n: int = 4096, min_length: float = 80.0) -> GridSpec:
    """Grid large enough to resolve phi.

    The tail decays like exp(-alpha x / 2), so alpha * L >= 124 puts the
    edge magnitude below the admissibility threshold.
    """
    length = max(min_length, 124.0 / p.alpha)
    n = max(min_n, 2 ** math.ceil(math.log2(length / h_target)))
    return GridSpec(n, length)


def full_wave(p: SolitonParams, grid: GridSpec) -> ComplexField:
    """Sample phi_{omega,c} on the grid, phase integral by cumulative quadrature."""
    x = grid.x
    amp = amplitude(p, x)
    out = ComplexField(grid, amp.astype(np.complex128))
    out.check_edge_decay()
    phase_mass = cumulative_integral(lambda y: amplitude(p, y) ** (2.0 * p.sigma), x)
    phase = 0.5 * p.c * x - phase_mass / (2.0 * p.sigma + 2.0)
    return ComplexField(grid, amp * np.exp(1j * phase))


def curly_i(p: SolitonParams, tol: float = 1e-10) -> float:
    """I(c) = integral over (0, inf) of (cosh x - c/(2 sqrt(w)))^(-1/sigma)."""
    gamma = p.speed_ratio
    if gamma > 1.0 - _ENDPOINT_MARGIN:
        raise ValueError(
            f"c/(2 sqrt(omega)) = {gamma:.8f} too close to 1; the integrand is "
            "non-integrable (or near-singular) at the right endpoint"
        )
    with np.errstate(over="ignore"):
        res = integrate_halfline(
            lambda x: (np.cosh(x) - gamma) ** (-1.0 / p.sigma), tol=tol
        )
    return res.value


def l2_mass_closed(p: SolitonParams) -> float:
    """Closed form for integral of |phi|^2: C_{omega,sigma} alpha^(2/sigma - 1) I(c)."""
    pref = (2.0 / p.sigma) * ((p.sigma + 1.0) / (2.0 * math.sqrt(p.omega))) ** (1.0 / p.sigma)
    return pref * p.alpha ** (2.0 / p.sigma - 1.0) * curly_i(p)


def pc_mass_closed(p: SolitonParams) -> float:
    """Closed form for integral of |phi|^{p_c}, p_c = 2 sigma."""
    gamma = p.speed_ratio
    if gamma > 1.0 - _ENDPOINT_MARGIN:
        raise ValueError(f"c/(2 sqrt(omega)) = {gamma:.8f} too close to 1")
    with np.errstate(over="ignore"):
        res = integrate_halfline(lambda x: 1.0 / (np.cosh(x) - gamma))
    return (2.0 * (p.sigma + 1.0) / p.sigma) * (p.alpha / (2.0 * math.sqrt(p.omega))) * res.value


def virial_ratio(p: SolitonParams, grid: GridSpec | None = None) -> float:
    """||phi_x||^2 / ||phi||^2 with spectral derivatives; equals omega."""
    if grid is None:
        grid = soliton_grid(p)
    phi = full_wave(p, grid)
    return (l2_norm(spatial_derivative(phi)) / l2_norm(phi)) ** 2


def hz_profile(sigma: float, z: float, x) -> np.ndarray:
    """h_z(x) = (cosh(2 sigma x) + z)^(-1/(2 sigma))."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if not 0 < z < 1:
        raise ValueError(f"z must lie in (0, 1), got {z}")
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return (np.cosh(2.0 * sigma * x) + z) ** (-1.0 / (2.0 * sigma))


def gz_field(sigma: float, z: float, grid: GridSpec) -> ComplexField:
    """Rescaled near-endpoint profile g_z on the grid.

    g_z(x) = (1-z^2)^(1/(2 sigma)) h_z(m x) exp(-i m Phi(m x)) with
    m = sqrt(1-z^2) and Phi the running integral of h_z^{2 sigma}.
    """
    m = math.sqrt(1.0 - z * z)
    x = grid.x
    prof = (1.0 - z * z) ** (1.0 / (2.0 * sigma)) * hz_profile(sigma, z, m * x)
    ComplexField(grid, prof.astype(np.complex128)).check_edge_decay()
    phi = cumulative_integral(lambda y: hz_profile(sigma, z, y) ** (2.0 * sigma), m * x)
    return ComplexField(grid, prof * np.exp(-1j * m * phi))


def gz_grid(sigma: float, z: float, h_target: float = 0.25) -> GridSpec:
    """Grid resolving g_z, whose width grows like 1/sqrt(1-z^2)."""
    m = math.sqrt(1.0 - z * z)
    length = max(80.0, 80.0 / m)
    n = max(4096, 2 ** math.ceil(math.log2(length / h_target)))
    return GridSpec(n, length)


def measure_a0(sigma: float, z: float, z_sweep=None) -> float:
    """Frequency-cutoff multiplier from measured stand-ins for the profile constants.

    a0 = sqrt(2) * (||d/dx g_z|| * (1-z^2)^(-1/(2 sigma)-1/4)) / min_z ||h_z||_L2.
    """
    if z_sweep is None:
        z_sweep = np.linspace(0.99, 1.0 - 1e-6, 25)
    grid = gz_grid(sigma, z)
    gz = gz_field(sigma, z, grid)
    c4 = l2_norm(spatial_derivative(gz)) * (1.0 - z * z) ** (-1.0 / (2.0 * sigma) - 0.25)
    c1 = min(_hz_l2_norm(sigma, zz) for zz in z_sweep)
    return math.sqrt(2.0) * c4 / c1


def _hz_l2_norm(sigma: float, z: float) -> float:
    res = integrate_halfline(lambda x: hz_profile(sigma, z, x) ** 2)
    return math.sqrt(2.0 * res.value)


def hsc_norm(p: SolitonParams, grid: GridSpec | None = None) -> float:
    """Scale-critical homogeneous Sobolev norm of phi on an auto-sized grid."""
    if grid is None:
        grid = soliton_grid(p)
    return sobolev_norm(full_wave(p, grid), p.s_c, homogeneous=True)


def hsc_lower_bound_scan(sigma: float, c_grid, omega: float,
                         grid: GridSpec | None = None):
    """Hdot^{s_c} norm of phi_{omega,c} per c; unresolved entries are NaN-flagged.

    Returns (values, resolved) arrays of equal length.
    """
    c_grid = np.asarray(c_grid, dtype=float)
    values = np.empty(c_grid.shape)
    resolved = np.ones(c_grid.shape, dtype=bool)
    for i, c in enumerate(c_grid):
        p = SolitonParams(omega, float(c), sigma)
        try:
            values[i] = hsc_norm(p, grid)
        except Exception:
            values[i] = np.nan
            resolved[i] = False
    return values, resolved


_NORM_CHOICES = ("L2", "H1", "Lpc", "Hsc")


def endpoint_rate(sigma: float, omega: float, norm: str,
                  n_points: int = 11, alpha0: float = 1.0) -> float:
    """Log-log slope of a norm of phi along the endpoint sequence alpha_j = alpha0 2^-j.

    L2 and H1 use the closed mass formula (the virial identity gives
    ||phi||_H1^2 = (1+omega) ||phi||_L2^2); Lpc is the p_c-th power of
    the L^{p_c} norm; Hsc is grid-computed.
    """
    if norm not in _NORM_CHOICES:
        raise ValueError(f"norm must be one of {_NORM_CHOICES}, got {norm!r}")
    alphas = alpha0 * 2.0 ** (-np.arange(n_points, dtype=float))
    values = []
    used = []
    for a in alphas:
        c = -math.sqrt(4.0 * omega - a * a)
        p = SolitonParams(omega, c, sigma)
        try:
            if norm == "L2":
                v = math.sqrt(l2_mass_closed(p))
            elif norm == "H1":
                v = math.sqrt((1.0 + omega) * l2_mass_closed(p))
            elif norm == "Lpc":
                v = pc_mass_closed(p)
            else:
                v = hsc_norm(p)
        except Exception:
            continue
        values.append(v)
        used.append(a)
    if len(values) < 4:
        raise RuntimeError(
            f"only {len(values)} usable points on the endpoint sequence; need >= 4"
        )
    slope = np.polyfit(np.log(used), np.log(values), 1)[0]
    return float(slope)

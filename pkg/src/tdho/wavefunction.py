"""Invariant eigenfunctions, phases and wave functions of the driven oscillator.

Wave functions are sampled on a uniform :class:`SpatialGrid`; expectation
values are grid quadratures with fourth-order finite-difference momentum
operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, DomainError, UsageError
from .profiles import OscillatorConstants

__all__ = [
    "SpatialGrid",
    "WaveField",
    "Observable",
    "hermite",
    "hermite_normalized",
    "phi_n",
    "alpha_n",
    "psi_n",
    "psi_n_static",
    "expectation",
    "default_grid",
    "sigma_grid",
    "derivative",
    "second_derivative",
]

MAX_HERMITE_ORDER = 200


@dataclass(frozen=True)
class SpatialGrid:
    x_min: float
    x_max: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)
                and self.x_max > self.x_min):
            raise ConfigError("grid needs finite x_max > x_min")
        if int(self.count) != self.count or self.count < 16:
            raise ConfigError("grid needs at least 16 points")
        object.__setattr__(self, "count", int(self.count))

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.count - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.count)

    def to_dict(self):
        return {"x_min": self.x_min, "x_max": self.x_max, "count": self.count}


@dataclass
class WaveField:
    grid: SpatialGrid
    n: int
    t: float
    values: np.ndarray

    def norm(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.spacing)

    def rows(self):
        """(x, re, im, abs2) columns for CSV output."""
        v = self.values
        return np.column_stack([self.grid.x, v.real, v.imag, v.real**2 + v.imag**2])


class Observable(str, Enum):
    IDENTITY = "identity"
    X = "x"
    X2 = "x2"
    P = "p"
    P2 = "p2"
    H = "H"
    I = "I"  # noqa: E741


def _check_n(n):
    if int(n) != n or n < 0:
        raise DomainError(f"quantum number must be a natural number, got {n!r}")
    if n > MAX_HERMITE_ORDER:
        raise DomainError(f"Hermite order {n} exceeds {MAX_HERMITE_ORDER}")
    return int(n)


def hermite(n: int, z):
    """Physicists' Hermite polynomial H_n(z) by three-term recurrence."""
    n = _check_n(n)
    z = np.asarray(z, dtype=float)
    h_prev, h = np.ones_like(z), 2.0 * z
    if n == 0:
        h = h_prev
    for k in range(1, n):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
    return float(h) if h.ndim == 0 else h


def hermite_normalized(n: int, z):
    """H_n(z) / sqrt(2^n n!), by the rescaled recurrence (no overflow in 2^n n!)."""
    n = _check_n(n)
    z = np.asarray(z, dtype=float)
    h_prev, h = np.ones_like(z), math.sqrt(2.0) * z
    if n == 0:
        h = h_prev
    for k in range(1, n):
        h_prev, h = h, math.sqrt(2.0 / (k + 1)) * z * h - math.sqrt(k / (k + 1)) * h_prev
    return h


def _phi0(x, rho, rhodot, constants):
    hbar, m0 = constants.hbar, constants.m0
    amp = (1.0 / (math.pi * hbar * rho * rho)) ** 0.25
    # (i m0 / 2 hbar) [rho'/rho + i / (m0 rho^2)] x^2
    expo = (1j * m0 / (2.0 * hbar)) * (rhodot / rho + 1j / (m0 * rho * rho)) * x * x
    return amp * np.exp(expo)


def phi_n(n, x, ep, t, constants: OscillatorConstants):
    """Eigenfunction of the invariant at time ``t`` (no dynamical phase)."""
    n = _check_n(n)
    rho, rhodot = ep.evaluate(t)
    x = np.asarray(x, dtype=float)
    z = x / (math.sqrt(constants.hbar) * rho)
    out = _phi0(x, rho, rhodot, constants) * hermite_normalized(n, z)
    return complex(out) if out.ndim == 0 else out


def alpha_n(n, ep, t, constants: OscillatorConstants):
    """Phase -(n + 1/2) int_0^t dt' / (m0 rho^2)."""
    n = _check_n(n)
    if np.any(np.asarray(t) < ep.t_span[0]):
        raise DomainError("phase defined for t >= start of the solution")
    return -(n + 0.5) * ep.phase_integral(t)


def psi_n(n, grid: SpatialGrid, ep, t, constants: OscillatorConstants, alpha=None) -> WaveField:
    """Full solution exp(i alpha_n) Phi_n on the grid.

    ``alpha`` may be supplied to reuse a phase computed elsewhere.
    """
    if alpha is None:
        alpha = alpha_n(n, ep, t, constants)
    values = np.exp(1j * alpha) * phi_n(n, grid.x, ep, t, constants)
    return WaveField(grid, int(n), float(t), values)


def psi_n_static(n, grid: SpatialGrid, t, constants: OscillatorConstants) -> WaveField:
    """Stationary state of the constant-frequency oscillator."""
    n = _check_n(n)
    m0, hbar, w0 = constants.m0, constants.hbar, constants.omega0
    x = grid.x
    xi = math.sqrt(m0 * w0 / hbar) * x
    gauss = (m0 * w0 / (math.pi * hbar)) ** 0.25 * np.exp(-m0 * w0 * x * x / (2.0 * hbar))
    norm = math.exp(-0.5 * (n * math.log(2.0) + math.lgamma(n + 1)))
    phase = np.exp(-1j * (n + 0.5) * w0 * t)
    return WaveField(grid, n, float(t), phase * norm * gauss * hermite(n, xi))


def derivative(f, h):
    """Fourth-order first derivative; one-sided stencils at both ends."""
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    return d


def second_derivative(f, h):
    """Fourth-order second derivative; one-sided stencils at both ends."""
    d = np.empty_like(f)
    h2 = 12.0 * h * h
    d[2:-2] = (-f[:-4] + 16.0 * f[1:-3] - 30.0 * f[2:-2] + 16.0 * f[3:-1] - f[4:]) / h2
    d[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4]
            - 10.0 * f[5]) / h2
    d[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) / h2
    d[-1] = (45.0 * f[-1] - 154.0 * f[-2] + 214.0 * f[-3] - 156.0 * f[-4] + 61.0 * f[-5]
             - 10.0 * f[-6]) / h2
    d[-2] = (10.0 * f[-1] - 15.0 * f[-2] - 4.0 * f[-3] + 14.0 * f[-4] - 6.0 * f[-5]
             + f[-6]) / h2
    return d


def expectation(fields, observable, ep, constants: OscillatorConstants) -> complex:
    """Matrix element <A|O|B> by grid quadrature.

    ``fields`` is a pair ``(A, B)``.  ``H`` uses omega at ``B.t`` and ``I``
    is assembled from rho and rho' at ``B.t``.
    """
    a, b = fields
    if a.grid != b.grid:
        raise UsageError("wave fields live on different grids")
    obs = Observable(observable)
    x, h = b.grid.x, b.grid.spacing
    hbar, m0 = constants.hbar, constants.m0
    psi = b.values

    def p(f):
        return -1j * hbar * derivative(f, h)

    def p2(f):
        return -hbar * hbar * second_derivative(f, h)

    if obs is Observable.IDENTITY:
        applied = psi
    elif obs is Observable.X:
        applied = x * psi
    elif obs is Observable.X2:
        applied = x * x * psi
    elif obs is Observable.P:
        applied = p(psi)
    elif obs is Observable.P2:
        applied = p2(psi)
    elif obs is Observable.H:
        w2 = ep.profile.omega_sq(b.t)
        applied = p2(psi) / (2.0 * m0) + 0.5 * m0 * w2 * x * x * psi
    else:
        rho, rhodot = ep.evaluate(b.t)
        eta1 = m0 * m0 * rhodot * rhodot + 1.0 / (rho * rho)
        eta2 = rho * rho
        eta3 = -m0 * rho * rhodot
        anti = x * p(psi) + p(x * psi)
        applied = 0.5 * (eta1 * x * x * psi + eta2 * p2(psi) + eta3 * anti)
    return complex(np.sum(np.conj(a.values) * applied) * h)


def sigma_grid(n, rho, hbar=1.0, nsigma=8.0, count=2048) -> SpatialGrid:
    """Symmetric grid reaching ``nsigma`` standard deviations of |Psi_n|^2."""
    half = nsigma * math.sqrt((n + 0.5) * hbar) * rho
    return SpatialGrid(-half, half, count)


def default_grid(ep, n, times, constants: OscillatorConstants, count=2048) -> SpatialGrid:
    """+-10 max_t(sqrt(hbar) rho) sqrt(n + 1), wide enough for the breathing packet."""
    rho = np.max(ep.rho(np.asarray(times, dtype=float)))
    half = 10.0 * math.sqrt(constants.hbar) * float(rho) * math.sqrt(n + 1)
    return SpatialGrid(-half, half, count)

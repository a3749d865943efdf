"""Crank-Nicolson propagator for i hbar dpsi/dt = H(t) psi on a finite grid.

This is the independent reference for the invariant-based pipeline: it
only ever sees omega(t) from the profile and never touches rho, r or any
other quantity derived from the Ermakov-Pinney equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import ConfigError, NumericError, UsageError
from .profiles import FrequencyProfile, OscillatorConstants
from .wavefunction import SpatialGrid, WaveField

__all__ = ["PropagationConfig", "propagate", "overlap"]

DT_OMEGA_LIMIT = 0.01
COVERAGE_SIGMAS = 8.0


@dataclass(frozen=True)
class PropagationConfig:
    grid: SpatialGrid
    dt: float
    t_end: float
    profile: FrequencyProfile
    constants: OscillatorConstants

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ConfigError("dt must be positive")
        if not math.isfinite(self.t_end):
            raise ConfigError("t_end must be finite")


def overlap(a: WaveField, b: WaveField) -> complex:
    """<a|b> as a grid sum."""
    if a.grid != b.grid:
        raise UsageError("wave fields live on different grids")
    return complex(np.sum(np.conj(a.values) * b.values) * a.grid.spacing)


def _check_config(initial: WaveField, config: PropagationConfig):
    if initial.grid != config.grid:
        raise UsageError("initial state is not on the configured grid")
    if not config.t_end > initial.t:
        raise ConfigError("t_end must lie after the initial time")
    w_max = config.profile.max_omega(initial.t, config.t_end)
    if config.dt > DT_OMEGA_LIMIT / w_max * (1.0 + 1e-12):
        raise ConfigError(f"dt={config.dt} exceeds {DT_OMEGA_LIMIT}/max omega = "
                          f"{DT_OMEGA_LIMIT / w_max}")
    x = config.grid.x
    dens = np.abs(initial.values) ** 2
    norm = dens.sum()
    mean = float((x * dens).sum() / norm)
    sigma = math.sqrt(float(((x - mean) ** 2 * dens).sum() / norm))
    if (mean - COVERAGE_SIGMAS * sigma < config.grid.x_min
            or mean + COVERAGE_SIGMAS * sigma > config.grid.x_max):
        raise ConfigError(f"grid does not reach {COVERAGE_SIGMAS:g} standard deviations "
                          "of the initial state on both sides")


def _stops(profile, t_start, t_end, snapshots):
    stops = {t_end}
    stops.update(t for t in snapshots if t_start < t < t_end)
    stops.update(profile.breakpoints(t_start, t_end))
    return sorted(stops)


def propagate(initial: WaveField, config: PropagationConfig, snapshots=()):
    """Evolve ``initial`` to ``config.t_end``.

    The time step is shrunk per segment so that snapshot times and
    frequency jumps fall exactly on step boundaries.  The potential is
    evaluated at the midpoint of each step; Dirichlet walls close the grid.

    Returns
    -------
    final : WaveField
    snaps : dict mapping each requested snapshot time to a WaveField
    """
    _check_config(initial, config)
    grid = config.grid
    x = grid.x
    h = grid.spacing
    m0, hbar = config.constants.m0, config.constants.hbar
    kin = hbar * hbar / (2.0 * m0 * h * h)
    off = -kin
    psi = np.array(initial.values, dtype=complex)
    if not np.all(np.isfinite(psi)):
        raise NumericError("initial state contains non-finite values")

    ab = np.empty((3, grid.count), dtype=complex)
    snaps = {}
    t = float(initial.t)
    wanted = {float(s) for s in snapshots}
    for stop in _stops(config.profile, t, config.t_end, wanted):
        n_steps = max(1, math.ceil((stop - t) / config.dt * (1.0 - 1e-12)))
        dt = (stop - t) / n_steps
        c = 1j * dt / (2.0 * hbar)
        for k in range(n_steps):
            t_mid = t + (k + 0.5) * dt
            diag = 2.0 * kin + 0.5 * m0 * config.profile.omega_sq(t_mid) * x * x
            # right-hand side (1 - i dt H / 2 hbar) psi
            hpsi = diag * psi
            hpsi[1:] += off * psi[:-1]
            hpsi[:-1] += off * psi[1:]
            rhs = psi - c * hpsi
            ab[0, 1:] = c * off
            ab[1] = 1.0 + c * diag
            ab[2, :-1] = c * off
            psi = solve_banded((1, 1), ab, rhs, overwrite_b=True, check_finite=False)
        if not np.all(np.isfinite(psi)):
            raise NumericError(f"propagation produced non-finite values before t={stop}")
        t = stop
        if t in wanted:
            snaps[t] = WaveField(grid, initial.n, t, psi.copy())
    return WaveField(grid, initial.n, t, psi), snaps

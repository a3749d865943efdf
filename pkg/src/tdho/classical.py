"""Classical mode equation k'' + omega(t)^2 k = 0.

Provides the fundamental pair of real solutions used by Pinney's
construction, the Landau-Lifshitz parametric-resonance swing, and the
complex Heisenberg-picture mode k(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._rk import Trajectory, inner_tol, integrate
from .errors import ConfigError, DomainError, ParameterError
from .profiles import FrequencyProfile

__all__ = [
    "ModePair",
    "SwingSolution",
    "solve_homogeneous",
    "wronskian",
    "swing_theta",
    "complex_mode",
]


class ModePair:
    """Two real solutions u, v of the mode equation with their derivatives.

    ``pair(t)`` returns the stacked array ``(u, u', v, v')``.
    """

    def __init__(self, states: Callable, t_span: tuple[float, float], t0: float | None = None):
        self._states = states
        self.t_span = (float(t_span[0]), float(t_span[1]))
        self.t0 = self.t_span[0] if t0 is None else float(t0)
        u, du, v, dv = self._states(self.t0)
        self.wronskian0 = float(u * dv - v * du)
        if self.wronskian0 == 0.0:
            raise DomainError("u and v are linearly dependent (zero Wronskian)")

    @classmethod
    def from_functions(cls, u, du, v, dv, t_span, t0=None):
        """Wrap closed-form callables, e.g. ``cos`` and ``sin``."""
        return cls(lambda t: np.array([u(t), du(t), v(t), dv(t)]), t_span, t0)

    def _check(self, t):
        lo, hi = self.t_span
        slack = 1e-12 * max(abs(lo), abs(hi), 1.0)
        if np.any(np.asarray(t) < lo - slack) or np.any(np.asarray(t) > hi + slack):
            raise DomainError(f"t outside mode-pair span [{lo}, {hi}]")

    def __call__(self, t):
        self._check(t)
        return np.asarray(self._states(t))

    def u(self, t):
        return self(t)[0]

    def v(self, t):
        return self(t)[2]


def _check_tol(tol):
    if not 1e-14 <= tol <= 1e-3:
        raise ConfigError(f"tolerance must lie in [1e-14, 1e-3], got {tol!r}")


def piecewise_segments(profile, t0, t1):
    """Split ``[t0, t1]`` at the profile's discontinuities."""
    cuts = [t0, *profile.breakpoints(t0, t1), t1]
    return list(zip(cuts[:-1], cuts[1:]))


def piece_omega_sq(profile, a, b):
    """omega^2 restricted to the half-open piece [a, b).

    Stage evaluations at the right end see the value from inside the piece,
    never the one after a jump located at ``b``.
    """
    hi = float(np.nextafter(b, a))
    return lambda t: profile.omega_sq(min(max(t, a), hi))


def solve_homogeneous(profile: FrequencyProfile, t0: float, t1: float, tol: float = 1e-10,
                      max_steps: int = 1_000_000) -> ModePair:
    """Fundamental pair with u(t0)=1, u'(t0)=0 and v(t0)=0, v'(t0)=1.

    Frequency discontinuities are integration breakpoints; the state is
    continuous across them.
    """
    if not t1 > t0:
        raise ConfigError("solve_homogeneous needs t1 > t0")
    _check_tol(tol)

    y = np.array([1.0, 0.0, 0.0, 1.0])
    parts = []
    for a, b in piecewise_segments(profile, t0, t1):
        w2 = piece_omega_sq(profile, a, b)
        traj = integrate(lambda t, y: np.array([y[1], -w2(t) * y[0], y[3], -w2(t) * y[2]]),
                         a, y, b, rtol=inner_tol(tol), atol=inner_tol(tol), max_steps=max_steps)
        parts.append(traj)
        y = traj(b)
    traj = parts[0] if len(parts) == 1 else Trajectory.concatenate(parts)
    return ModePair(traj, (t0, t1), t0)


def wronskian(pair: ModePair, t):
    """u(t) v'(t) - v(t) u'(t)."""
    u, du, v, dv = pair(t)
    return u * dv - v * du


@dataclass(frozen=True)
class SwingSolution:
    """Near-resonant swing Theta(t) for Omega^2 = Omega0^2 (1 + h cos((2 Omega0 + eps) t))."""

    Theta0_1: float
    Theta0_2: float
    Omega0: float
    h: float
    eps: float = 0.0

    @property
    def s(self) -> float:
        edge = self.h * self.Omega0 / 2.0
        if not abs(self.eps) < edge:
            raise ParameterError(
                f"growth exponent is not real: need |eps| < h*Omega0/2 = {edge}")
        return 0.5 * math.sqrt(edge * edge - self.eps * self.eps)


def swing_theta(sol: SwingSolution, t):
    s = sol.s
    wt = (sol.Omega0 + sol.eps / 2.0) * np.asarray(t, dtype=float)
    theta = sol.Theta0_1 * np.exp(s * t) * np.cos(wt) + sol.Theta0_2 * np.exp(-s * t) * np.sin(wt)
    return float(theta) if np.ndim(theta) == 0 else theta


def complex_mode(ep, t):
    """Heisenberg-picture mode k(t) = sqrt(hbar/2) rho(t) exp(-i gamma(t)).

    gamma(t) = int_0^t dt' / (m0 rho^2), so k solves the mode equation and
    k k'* - k* k' = i hbar / m0.  With hbar = 2 the modulus is exactly rho.
    """
    hbar = ep.constants.hbar
    rho, _ = ep.evaluate(t)
    gamma = ep.phase_integral(t)
    k = math.sqrt(hbar / 2.0) * rho * np.exp(-1j * gamma)
    return complex(k) if np.ndim(k) == 0 else k

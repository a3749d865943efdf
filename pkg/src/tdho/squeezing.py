"""Squeezing parameter and phase, variances and transition probabilities.

All observables follow from the triple (rho, rho', omega) at one instant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConsistencyError, DomainError
from .profiles import OscillatorConstants

__all__ = [
    "SqueezingState",
    "squeeze_params",
    "squeeze_state",
    "sudden_jump_r",
    "variance_x",
    "variance_p",
    "transition_prob",
    "persistence_prob",
    "excitation_prob",
    "sudden_jump_persistence",
]

PHASE_UNDEFINED_BELOW = 1e-12
ACOS_SLACK = 1e-9
_LOG_SPACE_FROM = 40


@dataclass(frozen=True)
class SqueezingState:
    """(r, phi, lambda) at time ``t``; ``phi`` is None when r vanishes."""

    r: float
    phi: Optional[float]
    lam: float
    omega: float
    t: float

    @property
    def cos_phi(self) -> float:
        return 0.0 if self.phi is None else math.cos(self.phi)


def squeeze_params(rho, rhodot, omega, m0):
    """Vectorised (r, phi, lambda); phi is NaN where undefined.

    lambda - 1 is formed as a sum of squares,
    (m0^2 rho'^2 + (1/rho - m0 omega rho)^2) / (4 m0 omega), so r stays
    accurate (r = asinh(sqrt(lambda - 1))) in the unsqueezed limit.
    """
    rho = np.asarray(rho, dtype=float)
    rhodot = np.asarray(rhodot, dtype=float)
    omega = np.asarray(omega, dtype=float)
    mw = m0 * omega
    excess = ((m0 * rhodot) ** 2 + (1.0 / rho - mw * rho) ** 2) / (4.0 * mw)
    lam = 1.0 + excess
    r = np.arcsinh(np.sqrt(excess))
    sh, ch = np.sqrt(excess), np.sqrt(lam)  # sinh r, cosh r
    defined = r >= PHASE_UNDEFINED_BELOW
    with np.errstate(invalid="ignore", divide="ignore"):
        arg = (1.0 + mw * rho * rho - 2.0 * lam) / (2.0 * sh * ch)
    bad = defined & (np.abs(arg) > 1.0 + ACOS_SLACK)
    if np.any(bad):
        raise ConsistencyError(
            f"squeezing-phase cosine {np.max(np.abs(arg[bad]))!r} outside [-1, 1]")
    phi = np.where(defined, np.arccos(np.clip(np.where(defined, arg, 0.0), -1.0, 1.0)), np.nan)
    return r, phi, lam


def squeeze_state(ep, t: float) -> SqueezingState:
    """SqueezingState of an EPSolution at a single time."""
    rho, rhodot = ep.evaluate(t)
    omega = float(ep.omega(t))
    r, phi, lam = squeeze_params(rho, rhodot, omega, ep.constants.m0)
    phi = None if np.isnan(phi) else float(phi)
    return SqueezingState(float(r), phi, float(lam), omega, float(t))


def sudden_jump_r(omega0, omega1):
    """Time-independent squeezing after an instantaneous omega0 -> omega1 jump."""
    if not (omega0 > 0.0 and omega1 > 0.0):
        raise DomainError("frequencies must be positive")
    # acosh((w0 + w1) / (2 sqrt(w0 w1))) = |ln(w1 / w0)| / 2
    return math.acosh((omega0 + omega1) / (2.0 * math.sqrt(omega0 * omega1)))


def _variance_factor(state: SqueezingState, sign: float) -> float:
    ch, sh = math.cosh(state.r), math.sinh(state.r)
    return ch * ch + sign * 2.0 * sh * ch * state.cos_phi + sh * sh


def variance_x(n: int, state: SqueezingState, constants: OscillatorConstants) -> float:
    if n < 0:
        raise DomainError("quantum number must be >= 0")
    return (_variance_factor(state, +1.0) * (n + 0.5) * constants.hbar
            / (constants.m0 * state.omega))


def variance_p(n: int, state: SqueezingState, constants: OscillatorConstants) -> float:
    if n < 0:
        raise DomainError("quantum number must be >= 0")
    return _variance_factor(state, -1.0) * (n + 0.5) * constants.hbar * constants.m0 * state.omega


def transition_prob(nu: int, r: float) -> float:
    """Probability of the ground state ending up in level ``nu`` (even)."""
    if nu < 0 or nu % 2:
        raise DomainError(f"transitions from the ground state reach even levels only, got {nu}")
    if r < 0.0:
        raise DomainError("squeezing parameter must be >= 0")
    th = math.tanh(r)
    if nu == 0:
        return 1.0 / math.cosh(r)
    if th == 0.0:
        return 0.0
    half = nu // 2
    if nu <= _LOG_SPACE_FROM:
        return (math.factorial(nu) * th**nu
                / (2**nu * math.factorial(half) ** 2 * math.cosh(r)))
    log_p = (math.lgamma(nu + 1) - 2.0 * math.lgamma(half + 1) - nu * math.log(2.0)
             + nu * math.log(th) - math.log(math.cosh(r)))
    return math.exp(log_p)


def persistence_prob(r):
    return 1.0 / np.cosh(r) if np.ndim(r) else 1.0 / math.cosh(r)


def excitation_prob(r):
    return 1.0 - persistence_prob(r)


def sudden_jump_persistence(omega0, omega1):
    if not (omega0 > 0.0 and omega1 > 0.0):
        raise DomainError("frequencies must be positive")
    return 2.0 * math.sqrt(omega0 * omega1) / (omega0 + omega1)

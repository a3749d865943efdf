"""Solutions rho(t) of the Ermakov-Pinney equation

    rho'' + omega(t)^2 rho = 1 / (m0^2 rho^3).

Three independent routes produce an :class:`EPSolution`: direct adaptive
integration of the nonlinear equation, Pinney's composition from two
solutions of the linear mode equation, and closed forms for the constant,
sudden-jump and Paul-trap profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np
from scipy import integrate as spi

from ._rk import Trajectory, inner_tol, integrate
from .classical import ModePair, piece_omega_sq, piecewise_segments, solve_homogeneous
from .errors import (ConfigError, ConstantsError, ConvergenceError, DomainError,
                     SingularityError)
from .mathieu import mathieu_pair
from .profiles import Constant, FrequencyProfile, OscillatorConstants, PaulTrap, SuddenJump

__all__ = [
    "Method",
    "EPSolution",
    "PinneyConstants",
    "rho_static",
    "default_initial",
    "pinney_compose",
    "pinney_constants_for",
    "pinney_solution",
    "solve_ep",
    "rho_sudden_jump",
    "rho_paul_trap",
    "closed_form_solution",
    "solve",
    "invariant_coefficients",
]

PINNEY_RTOL = 1e-12
COLLAPSE_FRACTION = 1e-3


class Method(str, Enum):
    DIRECT = "direct"
    PINNEY = "pinney"
    CLOSED_FORM = "closed_form"


class EPSolution:
    """rho(t) and rho'(t) on ``[t0, t1]`` with dense evaluation.

    Parameters
    ----------
    constants : OscillatorConstants
    profile : FrequencyProfile
    method : Method
    t_span : (float, float)
    states : callable
        ``states(t) -> (rho, rhodot)``, vectorised over ``t``.
    """

    def __init__(self, constants, profile, method, t_span, states: Callable):
        self.constants = constants
        self.profile = profile
        self.method = Method(method)
        self.t_span = (float(t_span[0]), float(t_span[1]))
        self._states = states

    def __repr__(self):
        return (f"EPSolution(method={self.method.value}, profile={self.profile!r}, "
                f"t_span={self.t_span})")

    def _check(self, t):
        lo, hi = self.t_span
        slack = 1e-12 * max(abs(lo), abs(hi), 1.0)
        tt = np.asarray(t, dtype=float)
        if np.any(tt < lo - slack) or np.any(tt > hi + slack):
            raise DomainError(f"t outside solution span [{lo}, {hi}]")
        return tt

    def evaluate(self, t):
        """Return ``(rho, rhodot)`` at ``t`` (scalar or array)."""
        tt = self._check(t)
        rho, rhodot = self._states(tt)
        if np.ndim(t) == 0:
            return float(rho), float(rhodot)
        return np.asarray(rho, dtype=float), np.asarray(rhodot, dtype=float)

    __call__ = evaluate

    def rho(self, t):
        return self.evaluate(t)[0]

    def rhodot(self, t):
        return self.evaluate(t)[1]

    def omega(self, t):
        return self.profile.omega(t)

    def rhoddot(self, t):
        """rho'' eliminated through the Ermakov-Pinney equation itself."""
        rho, _ = self.evaluate(t)
        m0 = self.constants.m0
        return 1.0 / (m0 * m0 * rho**3) - self.profile.omega_sq(t) * rho

    def phase_integral(self, t, epsabs=1e-12):
        """int_{t0}^{t} dt' / (m0 rho(t')^2) by adaptive quadrature.

        Array input is integrated piecewise between sorted sample times and
        accumulated, so a long time series costs one pass.
        """
        tt = np.atleast_1d(self._check(t))
        m0 = self.constants.m0
        t0 = self.t_span[0]

        def f(s):
            return 1.0 / (m0 * self._states(s)[0] ** 2)

        order = np.argsort(tt, kind="stable")
        out = np.empty_like(tt)
        acc, prev = 0.0, t0
        for i in order:
            ti = tt[i]
            if ti > prev:
                val, _ = spi.quad(f, prev, ti, epsabs=epsabs, epsrel=1e-13, limit=2000)
                acc += val
                prev = ti
            elif ti < prev:
                # only reachable for t < t0 within the rounding slack
                ti = prev
            out[i] = acc
        return float(out[0]) if np.ndim(t) == 0 else out

    def sample(self, ts):
        """Arrays ``(t, rho, rhodot)`` at the requested times."""
        ts = np.asarray(ts, dtype=float)
        rho, rhodot = self.evaluate(ts)
        return ts, rho, rhodot


def rho_static(constants: OscillatorConstants) -> float:
    """Fixed point 1/sqrt(m0 omega0) of the static oscillator."""
    return 1.0 / math.sqrt(constants.m0 * constants.omega0)


def default_initial(profile: FrequencyProfile, constants: OscillatorConstants):
    """(rho(0), rho'(0)) of the static ground configuration before the drive."""
    return 1.0 / math.sqrt(constants.m0 * profile.reference_omega()), 0.0


@dataclass(frozen=True)
class PinneyConstants:
    A: float
    B: float
    C: float


def _check_pinney(k: PinneyConstants, m0, W):
    target = 1.0 / (m0 * m0 * W * W)
    lhs = k.A * k.B - k.C * k.C
    if not abs(lhs - target) <= PINNEY_RTOL * abs(target):
        raise ConstantsError(
            f"AB - C^2 = {lhs!r} but 1/(m0^2 W^2) = {target!r}")


def pinney_compose(pair: ModePair, k: PinneyConstants, constants: OscillatorConstants, t):
    """rho = sqrt(A u^2 + B v^2 + 2 C u v) and its derivative."""
    _check_pinney(k, constants.m0, pair.wronskian0)
    u, du, v, dv = pair(t)
    radicand = k.A * u * u + k.B * v * v + 2.0 * k.C * u * v
    if np.any(radicand <= 0.0):
        raise DomainError("non-positive radicand in Pinney composition")
    rho = np.sqrt(radicand)
    rhodot = (k.A * u * du + k.B * v * dv + k.C * (u * dv + du * v)) / rho
    if np.ndim(t) == 0:
        return float(rho), float(rhodot)
    return rho, rhodot


def pinney_constants_for(pair: ModePair, constants: OscillatorConstants, rho_init):
    """Constants matching rho(t0), rho'(t0) for the fundamental pair at t0.

    Assumes the pair is normalised as u = 1, u' = 0, v = 0, v' = 1 at t0.
    """
    rho0, rhodot0 = rho_init
    W = pair.wronskian0
    A = rho0 * rho0
    C = rho0 * rhodot0
    B = (1.0 / (constants.m0 ** 2 * W * W) + C * C) / A
    return PinneyConstants(A, B, C)


def pinney_solution(profile, constants, t1, tol=1e-10, rho_init=None, t0=0.0):
    """EPSolution assembled from the fundamental pair of the mode equation."""
    if rho_init is None:
        rho_init = default_initial(profile, constants)
    _check_initial(rho_init)
    pair = solve_homogeneous(profile, t0, t1, tol)
    k = pinney_constants_for(pair, constants, rho_init)
    return EPSolution(constants, profile, Method.PINNEY, (t0, t1),
                      lambda t: pinney_compose(pair, k, constants, t))


def _check_initial(rho_init):
    rho0, rhodot0 = rho_init
    if not (math.isfinite(rho0) and rho0 > 0.0 and math.isfinite(rhodot0)):
        raise ConfigError("initial rho must be positive and finite")


def solve_ep(profile: FrequencyProfile, constants: OscillatorConstants, rho_init=None,
             t1: float = 10.0, tol: float = 1e-10, t0: float = 0.0,
             max_steps: int = 1_000_000) -> EPSolution:
    """Integrate the nonlinear Ermakov-Pinney equation directly.

    The 1/rho^3 term is evaluated as is; if rho collapses towards zero a
    :class:`SingularityError` is raised instead of stepping through.
    """
    if rho_init is None:
        rho_init = default_initial(profile, constants)
    _check_initial(rho_init)
    if not t1 > t0:
        raise ConfigError("solve_ep needs t1 > t0")
    if not 1e-14 <= tol <= 1e-3:
        raise ConfigError(f"tolerance must lie in [1e-14, 1e-3], got {tol!r}")
    inv_m2 = 1.0 / constants.m0 ** 2
    floor = 1e-8 * rho_init[0]

    last = [t0, rho_init[0], rho_init[1]]

    def check(t, y):
        if not y[0] > floor:
            raise SingularityError(f"rho collapsed to {float(y[0])!r} at t={float(t)}")
        last[:] = [t, y[0], y[1]]

    y = np.array(rho_init, dtype=float)
    parts = []
    for a, b in piecewise_segments(profile, t0, t1):
        w2 = piece_omega_sq(profile, a, b)

        def rhs(t, y, w2=w2):
            r = y[0]
            if not r > 0.0:
                return np.array([np.nan, np.nan])
            return np.array([y[1], inv_m2 / (r * r * r) - w2(t) * r])

        try:
            traj = integrate(rhs, a, y, b, rtol=inner_tol(tol), atol=inner_tol(tol) * rho_init[0],
                             max_steps=max_steps, check=check)
        except ConvergenceError as exc:
            t_last, rho_last, rhodot_last = last
            # the step size underflowed on the way into a collapse: rho tiny and falling
            if rho_last <= COLLAPSE_FRACTION * rho_init[0] and rhodot_last < 0.0:
                raise SingularityError(
                    f"rho collapsed towards 0 (rho={float(rho_last)!r} at t={float(t_last)})") from exc
            raise ConvergenceError(f"direct Ermakov-Pinney integration failed: {exc}") from exc
        parts.append(traj)
        y = traj(b)
    traj = parts[0] if len(parts) == 1 else Trajectory.concatenate(parts)
    return EPSolution(constants, profile, Method.DIRECT, (t0, t1), lambda t: traj(t))


def rho_sudden_jump(t, omega0, omega1, m0):
    """Closed form for t >= 0 after omega0 -> omega1, started from rest at 1/sqrt(m0 omega0)."""
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0.0):
        raise DomainError("sudden-jump closed form holds for t >= 0 only")
    s, c = np.sin(omega1 * tt), np.cos(omega1 * tt)
    ka = omega0 / (m0 * omega1 * omega1)
    kb = 1.0 / (m0 * omega0)
    rho = np.sqrt(ka * s * s + kb * c * c)
    rhodot = s * c * omega1 * (ka - kb) / rho
    if np.ndim(t) == 0:
        return float(rho), float(rhodot)
    return rho, rhodot


def rho_paul_trap(t, profile: PaulTrap, m0):
    """Closed form through the even/odd Mathieu solutions.

    The even solution is divided by its value at 0 and the odd one by its
    derivative (with respect to the Mathieu phase) at 0, which makes the
    result independent of how the Mathieu functions are normalised.
    """
    tt = np.asarray(t, dtype=float)
    params = (profile.mathieu_a, profile.mathieu_q)
    scale = math.pi / profile.tau
    ce, dce, se, dse = mathieu_pair(params, scale * tt)
    ce0, _, _, dse0 = mathieu_pair(params, 0.0)
    w0 = profile.omega0
    u, du = ce / ce0, scale * dce / ce0
    v, dv = se / (scale * dse0), dse / dse0
    rho2 = u * u / (m0 * w0) + w0 * v * v / m0
    rho = np.sqrt(rho2)
    rhodot = (u * du / (m0 * w0) + w0 * v * dv / m0) / rho
    if np.ndim(t) == 0:
        return float(rho), float(rhodot)
    return rho, rhodot


def closed_form_solution(profile: FrequencyProfile, constants: OscillatorConstants,
                         t1: float) -> EPSolution:
    """Closed-form EPSolution on ``[0, t1]`` with default initial conditions."""
    m0 = constants.m0
    if isinstance(profile, Constant):
        rho0 = 1.0 / math.sqrt(m0 * profile.omega0)

        def states(t):
            return np.full(np.shape(t), rho0), np.zeros(np.shape(t))
    elif isinstance(profile, SuddenJump):
        def states(t):
            return rho_sudden_jump(t, profile.omega0, profile.omega1, m0)
    elif isinstance(profile, PaulTrap):
        def states(t):
            return rho_paul_trap(t, profile, m0)
    else:
        raise ConfigError(f"no closed form for profile kind {profile.kind!r}")
    return EPSolution(constants, profile, Method.CLOSED_FORM, (0.0, t1), states)


def solve(profile, constants, t1, method="auto", tol=1e-10, rho_init=None) -> EPSolution:
    """Dispatch to one of the three routes; ``auto`` prefers a closed form."""
    if method == "auto":
        has_closed = isinstance(profile, (Constant, SuddenJump, PaulTrap))
        method = Method.CLOSED_FORM if has_closed and rho_init is None else Method.DIRECT
    method = Method(method)
    if method is Method.CLOSED_FORM:
        if rho_init is not None:
            raise ConfigError("closed forms support only the default initial conditions")
        return closed_form_solution(profile, constants, t1)
    if method is Method.PINNEY:
        return pinney_solution(profile, constants, t1, tol, rho_init)
    return solve_ep(profile, constants, rho_init, t1, tol)


def invariant_coefficients(ep: EPSolution, t):
    """(eta1, eta2, eta3) of I = (eta1 x^2 + eta2 p^2 + eta3 {x, p}) / 2."""
    rho, rhodot = ep.evaluate(t)
    m0 = ep.constants.m0
    eta1 = m0 * m0 * rhodot * rhodot + 1.0 / (rho * rho)
    eta2 = rho * rho
    eta3 = -m0 * rho * rhodot
    return eta1, eta2, eta3

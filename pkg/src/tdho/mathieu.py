"""Fundamental solutions of the Mathieu equation y'' + (a - 2 q cos 2x) y = 0.

``mathieu_even`` is the solution with y(0) = 1, y'(0) = 0 and
``mathieu_odd`` the one with y(0) = 0, y'(0) = 1.  Both are obtained by
tight-tolerance integration of the equation, which sidesteps
characteristic values and any normalization convention.  Trajectories
are cached per (a, q) and extended on demand.  Only x >= 0 is
integrated; parity (cos 2x is even) supplies negative x.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from ._rk import Trajectory, integrate
from .errors import ConfigError, ConvergenceError

__all__ = ["MathieuParams", "mathieu_even", "mathieu_odd", "mathieu_pair", "clear_cache"]

RTOL = 1e-13
_MIN_EXTENT = 2.0 * math.pi


@dataclass(frozen=True)
class MathieuParams:
    a: float
    q: float

    def __post_init__(self):
        a, q = float(self.a), float(self.q)
        if not (math.isfinite(a) and math.isfinite(q)):
            raise ConfigError("Mathieu parameters must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "q", q)


class _Cached:
    def __init__(self, params: MathieuParams):
        self.params = params
        self.extent = 0.0
        self.trajectory: Trajectory | None = None

    def rhs(self, x, y):
        k = self.params.a - 2.0 * self.params.q * math.cos(2.0 * x)
        return np.array([y[1], -k * y[0], y[3], -k * y[2]])

    def ensure(self, extent):
        if extent <= self.extent:
            return
        extent = max(extent, 2.0 * self.extent, _MIN_EXTENT)
        y0 = [1.0, 0.0, 0.0, 1.0]
        try:
            self.trajectory = integrate(self.rhs, 0.0, y0, extent, rtol=RTOL, atol=RTOL)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"Mathieu integration failed for a={self.params.a}, q={self.params.q}: {exc}"
            ) from exc
        self.extent = extent


_cache: dict[MathieuParams, _Cached] = {}
_lock = threading.Lock()


def clear_cache():
    with _lock:
        _cache.clear()


def _params(params) -> MathieuParams:
    if isinstance(params, MathieuParams):
        return params
    a, q = params
    return MathieuParams(a, q)


def mathieu_pair(params, x):
    """Return ``(even, even', odd, odd')`` at phase(s) ``x``."""
    p = _params(params)
    xmax = float(np.max(np.abs(x))) if np.size(x) else 0.0
    with _lock:
        entry = _cache.get(p)
        if entry is None:
            entry = _cache[p] = _Cached(p)
        entry.ensure(xmax * (1.0 + 1e-12) + 1e-12)
        traj = entry.trajectory
    x = np.asarray(x, dtype=float)
    y = traj(np.abs(x))
    # even solution: y(-x) = y(x), y'(-x) = -y'(x); odd solution the reverse
    s = np.where(x < 0.0, -1.0, 1.0)
    out = (y[0], s * y[1], s * y[2], y[3])
    if x.ndim == 0:
        return tuple(float(v) for v in out)
    return out


def mathieu_even(params, x):
    """Even fundamental solution and its derivative with respect to ``x``.

    Examples
    --------
    >>> v, d = mathieu_even((4.0, 0.0), 0.3)
    >>> abs(v - math.cos(0.6)) < 1e-10
    True
    """
    ye, dye, _, _ = mathieu_pair(params, x)
    return ye, dye


def mathieu_odd(params, x):
    """Odd fundamental solution (y(0) = 0, y'(0) = 1) and its derivative."""
    _, _, yo, dyo = mathieu_pair(params, x)
    return yo, dyo

"""Adaptive Dormand-Prince 5(4) integrator with continuous output.

Small, dependency-free (numpy only) implementation used by the classical,
Ermakov-Pinney and Mathieu solvers.  A trajectory keeps every accepted
step together with its interpolation polynomial, so values at arbitrary
times inside the span come from the integrator's own interpolant and are
reproducible.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, NumericError

# Butcher tableau of DOPRI5
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# difference between the 5th and the embedded 4th order weights
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# continuous extension (Shampine), y(t + s h) = y + h * K^T P [s, s^2, s^3, s^4]
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
# Callers divide a user tolerance by this before integrating: the step
# controller bounds the error at mesh points only, and the fourth-order
# interpolant (and its derivative) in between needs the headroom.
DENSE_SAFETY = 100.0


def inner_tol(tol: float) -> float:
    return max(tol / DENSE_SAFETY, 1e-15)


class Trajectory:
    """Piecewise-polynomial solution made of accepted integration steps.

    Segments are stored in order of increasing time regardless of the
    direction of integration.
    """

    def __init__(self, t_left, t_origin, h, y_origin, coeffs):
        self.t_left = np.asarray(t_left, dtype=float)
        self.t_origin = np.asarray(t_origin, dtype=float)
        self.h = np.asarray(h, dtype=float)
        self.y_origin = np.asarray(y_origin, dtype=float)
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.t_min = float(self.t_left[0])
        self.t_max = float(np.max(self.t_left + np.abs(self.h)))

    @property
    def n_steps(self) -> int:
        return len(self.h)

    @property
    def dim(self) -> int:
        return self.y_origin.shape[1]

    @classmethod
    def concatenate(cls, parts):
        parts = sorted(parts, key=lambda p: p.t_min)
        return cls(
            np.concatenate([p.t_left for p in parts]),
            np.concatenate([p.t_origin for p in parts]),
            np.concatenate([p.h for p in parts]),
            np.concatenate([p.y_origin for p in parts]),
            np.concatenate([p.coeffs for p in parts]),
        )

    def __call__(self, t):
        """State vector(s) at ``t``; shape ``(dim,)`` or ``(dim, len(t))``."""
        scalar = np.ndim(t) == 0
        tt = np.atleast_1d(np.asarray(t, dtype=float))
        span = self.t_max - self.t_min
        slack = 1e-12 * max(span, abs(self.t_max), 1.0)
        if np.any(tt < self.t_min - slack) or np.any(tt > self.t_max + slack):
            raise ValueError(
                f"time outside integrated span [{self.t_min}, {self.t_max}]")
        idx = np.clip(np.searchsorted(self.t_left, tt, side="right") - 1, 0, self.n_steps - 1)
        s = (tt - self.t_origin[idx]) / self.h[idx]
        powers = np.stack([s, s * s, s**3, s**4], axis=-1)
        # (n, d, 4) x (n, 4) -> (n, d)
        incr = np.einsum("ndk,nk->nd", self.coeffs[idx], powers)
        y = self.y_origin[idx] + self.h[idx, None] * incr
        y = y.T
        return y[:, 0] if scalar else y


def _initial_step(f, t0, y0, f0, direction, rtol, atol, span):
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = y0 + direction * h0 * f0
    f1 = f(t0 + direction * h0, y1)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, span)


def integrate(f, t0, y0, t1, rtol=1e-10, atol=None, max_steps=2_000_000, check=None,
              max_step=np.inf):
    """Integrate ``y' = f(t, y)`` from ``t0`` to ``t1`` (either direction).

    Parameters
    ----------
    f : callable
        Right-hand side returning an array shaped like ``y``.
    rtol, atol : float
        Local error tolerances; ``atol`` defaults to ``rtol``.
    check : callable, optional
        ``check(t, y)`` called on every accepted step; may raise to abort.

    Returns
    -------
    Trajectory
    """
    y = np.array(y0, dtype=float)
    if atol is None:
        atol = rtol
    if t1 == t0:
        raise ValueError("empty integration interval")
    direction = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)
    t = float(t0)
    k = np.empty((7, y.size))
    k[0] = f(t, y)
    h = _initial_step(f, t, y, k[0], direction, rtol, atol, span)
    h = min(h, max_step)
    min_step = 1e-14 * max(abs(t0), abs(t1), span)

    t_origin, hs, ys, coeffs = [], [], [], []
    steps = 0
    while direction * (t1 - t) > 0.0:
        if steps >= max_steps:
            raise ConvergenceError(
                f"step budget of {max_steps} exhausted at t={t} (tolerance {rtol})")
        if h < min_step:
            raise ConvergenceError(f"step size underflow at t={t} (tolerance {rtol})")
        if direction * (t + direction * h - t1) > 0.0 or span - abs(t - t0) - h < min_step:
            h = abs(t1 - t)
        hd = direction * h
        for i in range(1, 7):
            k[i] = f(t + _C[i] * hd, y + hd * (np.dot(_A[i], k[:i])))
        y_new = y + hd * (_B @ k)
        err = hd * (_E @ k)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = np.sqrt(np.mean((err / scale) ** 2))
        steps += 1
        if not np.isfinite(err_norm):
            if not np.all(np.isfinite(y_new)) and h <= min_step:
                raise NumericError(f"non-finite state at t={t}")
            h *= _MIN_FACTOR
            continue
        if err_norm <= 1.0:
            t_new = t1 if h == abs(t1 - t) else t + hd
            t_origin.append(t)
            hs.append(hd)
            ys.append(y.copy())
            coeffs.append(k.T @ _P)
            if check is not None:
                check(t_new, y_new)
            t = t_new
            y = y_new
            k[0] = k[6]  # FSAL
            factor = _MAX_FACTOR if err_norm == 0.0 else min(
                _MAX_FACTOR, _SAFETY * err_norm ** (-1 / 5))
            h = min(h * factor, max_step)
        else:
            h *= max(_MIN_FACTOR, _SAFETY * err_norm ** (-1 / 5))

    t_origin = np.array(t_origin)
    hs = np.array(hs)
    ys = np.array(ys)
    coeffs = np.array(coeffs)
    if direction < 0.0:
        order = slice(None, None, -1)
        t_origin, hs, ys, coeffs = t_origin[order], hs[order], ys[order], coeffs[order]
        t_left = t_origin + hs
    else:
        t_left = t_origin
    return Trajectory(t_left, t_origin, hs, ys, coeffs)

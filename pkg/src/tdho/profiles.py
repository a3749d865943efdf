"""Angular-frequency profiles omega(t) for the time-dependent oscillator.

Every profile is an immutable value exposing ``omega`` and ``omega_sq``.
Both accept scalars or numpy arrays and return the same shape.  Profiles
round-trip through plain dictionaries with a ``kind`` discriminator, which
is the JSON format read by the command-line interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ConfigError, DomainError

__all__ = [
    "OscillatorConstants",
    "Constant",
    "SuddenJump",
    "PaulTrap",
    "ParametricResonance",
    "Tabulated",
    "FrequencyProfile",
    "omega_at",
    "omega_sq_at",
    "profile_from_dict",
    "profile_to_dict",
]


def _positive(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0.0):
        raise ConfigError(f"{name} must be a finite positive number, got {value!r}")
    return value


def _out(values):
    # scalars in, scalars out
    return float(values) if np.ndim(values) == 0 else values


@dataclass(frozen=True)
class OscillatorConstants:
    """Mass, reduced Planck constant and reference frequency (all > 0)."""

    m0: float = 1.0
    hbar: float = 1.0
    omega0: float = 1.0

    def __post_init__(self):
        for name in ("m0", "hbar", "omega0"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))

    def to_dict(self):
        return {"m0": self.m0, "hbar": self.hbar, "omega0": self.omega0}


class _Profile:
    kind: str = ""

    def omega_sq(self, t):
        raise NotImplementedError

    def omega(self, t):
        return _out(np.sqrt(self.omega_sq(t)))

    def reference_omega(self) -> float:
        """Frequency of the static oscillator the system starts from."""
        raise NotImplementedError

    def max_omega(self, t0: float, t1: float) -> float:
        """Upper bound of omega(t) on ``[t0, t1]``."""
        raise NotImplementedError

    def breakpoints(self, t0: float, t1: float) -> list[float]:
        """Interior times where omega(t) is discontinuous."""
        return []

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(_Profile):
    omega0: float
    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "omega0", _positive("omega0", self.omega0))

    def omega(self, t):
        return _out(np.full(np.shape(t), self.omega0))

    def omega_sq(self, t):
        return _out(np.full(np.shape(t), self.omega0 * self.omega0))

    def reference_omega(self):
        return self.omega0

    def max_omega(self, t0, t1):
        return self.omega0

    def to_dict(self):
        return {"kind": self.kind, "omega0": self.omega0}


@dataclass(frozen=True)
class SuddenJump(_Profile):
    """omega0 for t < 0, omega1 for t >= 0."""

    omega0: float
    omega1: float
    kind = "sudden_jump"

    def __post_init__(self):
        object.__setattr__(self, "omega0", _positive("omega0", self.omega0))
        object.__setattr__(self, "omega1", _positive("omega1", self.omega1))

    def omega(self, t):
        return _out(np.where(np.asarray(t) < 0.0, self.omega0, self.omega1))

    def omega_sq(self, t):
        w = np.where(np.asarray(t) < 0.0, self.omega0, self.omega1)
        return _out(w * w)

    def reference_omega(self):
        return self.omega0

    def max_omega(self, t0, t1):
        if t1 < 0.0:
            return self.omega0
        if t0 >= 0.0:
            return self.omega1
        return max(self.omega0, self.omega1)

    def breakpoints(self, t0, t1):
        return [0.0] if t0 < 0.0 < t1 else []

    def to_dict(self):
        return {"kind": self.kind, "omega0": self.omega0, "omega1": self.omega1}


@dataclass(frozen=True)
class PaulTrap(_Profile):
    """omega(t)^2 = omega0^2 (beta + gamma cos(2 pi t / tau)) / (beta + gamma)."""

    omega0: float
    beta: float
    gamma: float
    tau: float
    kind = "paul_trap"

    def __post_init__(self):
        for name in ("omega0", "beta", "gamma", "tau"):
            object.__setattr__(self, name, _positive(name, getattr(self, name)))
        if not self.beta > self.gamma:
            raise ConfigError("PaulTrap requires beta > gamma > 0")

    @property
    def mathieu_a(self) -> float:
        w2t2 = (self.omega0 * self.tau) ** 2
        return self.beta * w2t2 / (math.pi**2 * (self.beta + self.gamma))

    @property
    def mathieu_q(self) -> float:
        w2t2 = (self.omega0 * self.tau) ** 2
        return -self.gamma * w2t2 / (2.0 * math.pi**2 * (self.beta + self.gamma))

    def omega_sq(self, t):
        # exact reduction of t modulo tau keeps the period bit-exact
        phase = np.fmod(np.asarray(t, dtype=float), self.tau) / self.tau
        c = np.cos(2.0 * math.pi * phase)
        w2 = self.omega0 * self.omega0 * (self.beta + self.gamma * c) / (self.beta + self.gamma)
        return _out(w2)

    def reference_omega(self):
        return self.omega0

    def max_omega(self, t0, t1):
        return self.omega0

    def to_dict(self):
        return {"kind": self.kind, "omega0": self.omega0, "beta": self.beta,
                "gamma": self.gamma, "tau": self.tau}


@dataclass(frozen=True)
class ParametricResonance(_Profile):
    """Omega(t)^2 = Omega0^2 (1 + h cos((2 Omega0 + eps) t)), driven near resonance."""

    Omega0: float
    h: float
    eps: float = 0.0
    kind = "parametric_resonance"

    def __post_init__(self):
        object.__setattr__(self, "Omega0", _positive("Omega0", self.Omega0))
        h = float(self.h)
        eps = float(self.eps)
        if not 0.0 < h < 1.0:
            raise ConfigError(f"parametric resonance needs 0 < h < 1, got {h!r}")
        if not abs(eps) < h * self.Omega0 / 2.0:
            raise ConfigError("parametric resonance needs |eps| < h*Omega0/2")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "eps", eps)

    @property
    def drive_frequency(self) -> float:
        return 2.0 * self.Omega0 + self.eps

    def omega_sq(self, t):
        c = np.cos(self.drive_frequency * np.asarray(t, dtype=float))
        return _out(self.Omega0 * self.Omega0 * (1.0 + self.h * c))

    def reference_omega(self):
        return self.Omega0 * math.sqrt(1.0 + self.h)

    def max_omega(self, t0, t1):
        return self.Omega0 * math.sqrt(1.0 + self.h)

    def to_dict(self):
        return {"kind": self.kind, "Omega0": self.Omega0, "h": self.h, "eps": self.eps}


@dataclass(frozen=True)
class Tabulated(_Profile):
    """Sampled omega(t), interpolated by a monotone (PCHIP) cubic."""

    t: tuple
    omega_values: tuple
    _interp: Any = field(init=False, repr=False, compare=False)
    kind = "tabulated"

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        w = np.asarray(self.omega_values, dtype=float)
        if t.ndim != 1 or t.shape != w.shape or t.size < 2:
            raise ConfigError("tabulated profile needs matching 1-d t and omega with >= 2 samples")
        if not np.all(np.isfinite(t)) or not np.all(np.diff(t) > 0.0):
            raise ConfigError("tabulated times must be finite and strictly increasing")
        if not np.all(np.isfinite(w)) or not np.all(w > 0.0):
            raise ConfigError("tabulated frequencies must be finite and positive")
        object.__setattr__(self, "t", tuple(t.tolist()))
        object.__setattr__(self, "omega_values", tuple(w.tolist()))
        object.__setattr__(self, "_interp", PchipInterpolator(t, w, extrapolate=False))

    def _check(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < self.t[0]) or np.any(t > self.t[-1]):
            raise DomainError(
                f"time outside tabulated domain [{self.t[0]}, {self.t[-1]}]")
        return t

    def omega(self, t):
        return _out(self._interp(self._check(t)))

    def omega_sq(self, t):
        w = self._interp(self._check(t))
        return _out(w * w)

    def reference_omega(self):
        return self.omega_values[0]

    def max_omega(self, t0, t1):
        # PCHIP never overshoots the data, so the sample maximum bounds it
        t = np.asarray(self.t)
        w = np.asarray(self.omega_values)
        lo = max(np.searchsorted(t, t0, side="right") - 1, 0)
        hi = np.searchsorted(t, t1, side="left") + 1
        return float(w[lo:hi].max())

    def to_dict(self):
        return {"kind": self.kind, "t": list(self.t), "omega": list(self.omega_values)}


FrequencyProfile = Constant | SuddenJump | PaulTrap | ParametricResonance | Tabulated

_KINDS = {
    "constant": (Constant, ("omega0",)),
    "sudden_jump": (SuddenJump, ("omega0", "omega1")),
    "paul_trap": (PaulTrap, ("omega0", "beta", "gamma", "tau")),
    "parametric_resonance": (ParametricResonance, ("Omega0", "h", "eps")),
    "tabulated": (Tabulated, ("t", "omega")),
}


def omega_at(profile: FrequencyProfile, t):
    """Angular frequency of ``profile`` at time(s) ``t``."""
    return profile.omega(t)


def omega_sq_at(profile: FrequencyProfile, t):
    """Squared angular frequency, evaluated without a square root where possible."""
    return profile.omega_sq(t)


def profile_from_dict(doc: Mapping[str, Any]) -> FrequencyProfile:
    """Build a profile from a ``{"kind": ..., <fields>}`` mapping."""
    if not isinstance(doc, Mapping) or "kind" not in doc:
        raise ConfigError("profile must be an object with a 'kind' field")
    kind = doc["kind"]
    if kind not in _KINDS:
        raise ConfigError(f"unknown profile kind {kind!r}; expected one of {sorted(_KINDS)}")
    cls, names = _KINDS[kind]
    unknown = set(doc) - set(names) - {"kind"}
    if unknown:
        raise ConfigError(f"unexpected fields for {kind}: {sorted(unknown)}")
    kwargs = {}
    for name in names:
        if name not in doc:
            if kind == "parametric_resonance" and name == "eps":
                continue
            raise ConfigError(f"profile {kind} is missing field {name!r}")
        kwargs["omega_values" if name == "omega" else name] = doc[name]
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid {kind} profile: {exc}") from exc


def profile_to_dict(profile: FrequencyProfile) -> dict[str, Any]:
    return profile.to_dict()

"""Tables behind the CLI subcommands and the figure data sets.

Every function returns ``(columns, rows, meta)`` ready for
:func:`tdho.csvio.write_csv`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import numpy as np

from .ermakov import Method, solve
from .errors import ConfigError
from .profiles import OscillatorConstants, PaulTrap, profile_from_dict
from .squeezing import squeeze_params, sudden_jump_persistence
from .wavefunction import SpatialGrid, default_grid, psi_n

__all__ = [
    "RunConfig",
    "FIGURES",
    "rho_table",
    "squeeze_table",
    "variances_table",
    "probabilities_table",
    "wavefunction_table",
    "figure_table",
]

FIGURES = ("fig1", "fig2", "fig3a", "fig3b", "fig4a", "fig4b")

# parameters of the Paul-trap figures, arbitrary units
FIG_BETA, FIG_GAMMA, FIG_OMEGA0_TAU = 1.0, 0.5, 3.0
FIG_PERIODS = 5.0
FIG_SAMPLES = 501
FIG1_RANGE = (0.01, 10.0)
FIG1_SAMPLES = 301


@dataclass
class RunConfig:
    profile: Any
    constants: OscillatorConstants
    n: int = 0
    t0: float = 0.0
    t1: float = 10.0
    samples: int = 201
    grid: Optional[SpatialGrid] = None
    t: Optional[float] = None
    method: str = "auto"
    tol: float = 1e-10
    output: Optional[str] = None
    source: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "RunConfig":
        if not isinstance(doc, Mapping):
            raise ConfigError("configuration must be a JSON object")
        known = {"profile", "constants", "n", "time", "grid", "t", "method", "tol", "output"}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        if "profile" not in doc:
            raise ConfigError("configuration needs a 'profile'")
        profile = profile_from_dict(doc["profile"])
        cdoc = dict(doc.get("constants") or {})
        extra = set(cdoc) - {"m0", "hbar", "omega0"}
        if extra:
            raise ConfigError(f"unknown constants: {sorted(extra)}")
        try:
            constants = OscillatorConstants(**cdoc)
            n = doc.get("n", 0)
            if isinstance(n, bool) or int(n) != n or n < 0:
                raise ConfigError("n must be a natural number")
            time = doc.get("time") or {}
            t0 = float(time.get("t0", 0.0))
            t1 = float(time.get("t1", 10.0))
            samples = time.get("samples", 201)
            if isinstance(samples, bool) or int(samples) != samples:
                raise ConfigError("time.samples must be an integer")
            grid = None
            if doc.get("grid") is not None:
                g = doc["grid"]
                grid = SpatialGrid(float(g["x_min"]), float(g["x_max"]), g.get("count", 2048))
            tol = float(doc.get("tol", 1e-10))
            t_wave = doc.get("t")
        except (TypeError, KeyError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid configuration: {exc}") from exc
        if not (math.isfinite(t0) and math.isfinite(t1)) or t0 < 0.0:
            raise ConfigError("time range must be finite with t0 >= 0")
        if not t1 > t0:
            raise ConfigError(f"empty time range [{t0}, {t1}]")
        if samples < 2:
            raise ConfigError("time.samples must be >= 2")
        method = doc.get("method", "auto")
        if method != "auto" and method not in {m.value for m in Method}:
            raise ConfigError(f"unknown method {method!r}")
        if not 1e-14 <= tol <= 1e-3:
            raise ConfigError("tol must lie in [1e-14, 1e-3]")
        if t_wave is not None:
            t_wave = float(t_wave)
            if not t0 <= t_wave <= t1:
                raise ConfigError("wave-function time t must lie in the time range")
        return cls(profile, constants, int(n), t0, t1, int(samples), grid, t_wave,
                   method, tol, doc.get("output"), dict(doc))

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.samples)

    def solution(self):
        return solve(self.profile, self.constants, self.t1, method=self.method, tol=self.tol)

    def meta(self, ep=None) -> dict:
        meta = {"profile": self.profile.to_dict(), "constants": self.constants.to_dict(),
                "n": self.n}
        if ep is not None:
            meta["method"] = ep.method.value
        return meta


def _squeeze_arrays(ep, ts):
    rho, rhodot = ep.evaluate(ts)
    omega = np.asarray(ep.omega(ts), dtype=float)
    r, phi, lam = squeeze_params(rho, rhodot, omega, ep.constants.m0)
    return rho, rhodot, omega, r, phi, lam


def rho_table(cfg: RunConfig):
    ep = cfg.solution()
    ts, rho, rhodot = ep.sample(cfg.times)
    return ["t", "rho", "rhodot"], np.column_stack([ts, rho, rhodot]), cfg.meta(ep)


def squeeze_table(cfg: RunConfig):
    ep = cfg.solution()
    ts = cfg.times
    _, _, omega, r, phi, lam = _squeeze_arrays(ep, ts)
    return (["t", "omega", "lambda", "r", "phi"],
            np.column_stack([ts, omega, lam, r, phi]), cfg.meta(ep))


def _variances(ep, ts, n, constants):
    # closed forms in terms of (r, phi), with the cross term dropped when phi is undefined
    _, _, omega, r, phi, _ = _squeeze_arrays(ep, ts)
    cos_phi = np.where(np.isnan(phi), 0.0, np.cos(np.nan_to_num(phi)))
    ch, sh = np.cosh(r), np.sinh(r)
    fx = ch * ch + 2.0 * sh * ch * cos_phi + sh * sh
    fp = ch * ch - 2.0 * sh * ch * cos_phi + sh * sh
    m0, hbar = constants.m0, constants.hbar
    var_x = fx * (n + 0.5) * hbar / (m0 * omega)
    var_p = fp * (n + 0.5) * hbar * m0 * omega
    bar_x = hbar * (n + 0.5) / (m0 * constants.omega0)
    bar_p = hbar * m0 * constants.omega0 * (n + 0.5)
    return var_x, var_p, var_x / bar_x, var_p / bar_p


def variances_table(cfg: RunConfig):
    ep = cfg.solution()
    ts = cfg.times
    var_x, var_p, nx, np_ = _variances(ep, ts, cfg.n, cfg.constants)
    return (["t", "var_x", "var_p", "var_x_normalized", "var_p_normalized"],
            np.column_stack([ts, var_x, var_p, nx, np_]), cfg.meta(ep))


def probabilities_table(cfg: RunConfig):
    ep = cfg.solution()
    ts = cfg.times
    r = _squeeze_arrays(ep, ts)[3]
    p_p = 1.0 / np.cosh(r)
    return ["t", "r", "P_p", "P_e"], np.column_stack([ts, r, p_p, 1.0 - p_p]), cfg.meta(ep)


def wavefunction_table(cfg: RunConfig):
    ep = cfg.solution()
    t = cfg.t1 if cfg.t is None else cfg.t
    grid = cfg.grid or default_grid(ep, cfg.n, cfg.times, cfg.constants)
    field_ = psi_n(cfg.n, grid, ep, t, cfg.constants)
    meta = cfg.meta(ep)
    meta.update({"t": t, "grid": grid.to_dict()})
    return ["x", "re", "im", "abs2"], field_.rows(), meta


def _paul_figure_solution():
    constants = OscillatorConstants(m0=1.0, hbar=1.0, omega0=1.0)
    profile = PaulTrap(omega0=1.0, beta=FIG_BETA, gamma=FIG_GAMMA, tau=FIG_OMEGA0_TAU)
    ep = solve(profile, constants, FIG_PERIODS * profile.tau, method=Method.CLOSED_FORM)
    return profile, constants, ep


def figure_table(which: str):
    """Data set for one figure id in :data:`FIGURES`."""
    if which not in FIGURES:
        raise ConfigError(f"unknown figure {which!r}; expected one of {FIGURES}")
    if which == "fig1":
        ratio = np.logspace(math.log10(FIG1_RANGE[0]), math.log10(FIG1_RANGE[1]), FIG1_SAMPLES)
        ratio = np.unique(np.concatenate([ratio, [1.0, 2.0]]))
        pp = np.array([sudden_jump_persistence(1.0, w) for w in ratio])
        meta = {"figure": "fig1", "quantity": "persistence probability after a sudden jump",
                "axis": "omega1/omega0 log-spaced on [0.01, 10], plus exact 1 and 2"}
        return ["omega1_over_omega0", "P_p"], np.column_stack([ratio, pp]), meta

    profile, constants, ep = _paul_figure_solution()
    s = np.linspace(0.0, FIG_PERIODS, FIG_SAMPLES)
    ts = s * profile.tau
    meta = {"figure": which, "profile": profile.to_dict(), "constants": constants.to_dict(),
            "method": ep.method.value}
    if which == "fig2":
        r = _squeeze_arrays(ep, ts)[3]
        return ["t_over_tau", "r"], np.column_stack([s, r]), meta
    if which in ("fig3a", "fig3b"):
        _, _, nx, np_ = _variances(ep, ts, 0, constants)
        meta["normalization"] = ("var_x / (hbar (n+1/2) / (m0 omega0))" if which == "fig3a"
                                 else "var_p / (hbar m0 omega0 (n+1/2))")
        col = nx if which == "fig3a" else np_
        name = "var_x_normalized" if which == "fig3a" else "var_p_normalized"
        return ["t_over_tau", name], np.column_stack([s, col]), meta
    r = _squeeze_arrays(ep, ts)[3]
    p_p = 1.0 / np.cosh(r)
    if which == "fig4a":
        return ["t_over_tau", "P_p"], np.column_stack([s, p_p]), meta
    return ["t_over_tau", "P_e"], np.column_stack([s, 1.0 - p_p]), meta

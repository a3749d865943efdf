"""Time-dependent quantum harmonic oscillator via Lewis-Riesenfeld invariants."""

__version__ = "0.1.0"

from .profiles import (  # noqa: E402
    Constant,
    OscillatorConstants,
    ParametricResonance,
    PaulTrap,
    SuddenJump,
    Tabulated,
    omega_at,
    omega_sq_at,
    profile_from_dict,
)
from .ermakov import EPSolution, solve, solve_ep  # noqa: E402

__all__ = [
    "__version__",
    "Constant",
    "OscillatorConstants",
    "ParametricResonance",
    "PaulTrap",
    "SuddenJump",
    "Tabulated",
    "omega_at",
    "omega_sq_at",
    "profile_from_dict",
    "EPSolution",
    "solve",
    "solve_ep",
]

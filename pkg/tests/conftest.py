import numpy as np
import pytest

from tdho.profiles import Constant, OscillatorConstants, PaulTrap, SuddenJump

# sixth-order central stencil for a first derivative
_D1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0


def central_d1(f, ts, h):
    """Central-difference derivative of a vectorised callable at ``ts``."""
    return sum(c * f(ts + (j - 3) * h) for j, c in enumerate(_D1)) / h


def interior(ts, breakpoints, margin):
    ts = np.asarray(ts)
    keep = np.ones(ts.shape, dtype=bool)
    for b in breakpoints:
        keep &= np.abs(ts - b) > margin
    return ts[keep]


FIG_TRAP = PaulTrap(omega0=1.0, beta=1.0, gamma=0.5, tau=3.0)
JUMP = SuddenJump(omega0=1.0, omega1=2.0)
STATIC = Constant(1.0)

# (name, profile, end time) used by most cross-module tests
PROFILES = [("constant", STATIC, 10.0), ("sudden_jump", JUMP, 10.0), ("paul_trap", FIG_TRAP, 15.0)]


@pytest.fixture(params=[1.0, 2.0], ids=["hbar1", "hbar2"])
def constants(request):
    return OscillatorConstants(m0=1.0, hbar=request.param, omega0=1.0)


@pytest.fixture
def unit():
    return OscillatorConstants()

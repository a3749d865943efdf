import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tdho.errors import ConfigError, DomainError
from tdho.profiles import (Constant, OscillatorConstants, ParametricResonance, PaulTrap,
                           SuddenJump, Tabulated, omega_at, omega_sq_at, profile_from_dict,
                           profile_to_dict)


def test_paul_trap_at_origin():
    assert omega_at(PaulTrap(1.0, 1.0, 0.5, 3.0), 0.0) == pytest.approx(1.0, abs=1e-15)


def test_sudden_jump_before_jump():
    assert omega_at(SuddenJump(1.0, 2.0), -0.1) == 1.0


def test_sudden_jump_at_and_after_jump():
    p = SuddenJump(1.0, 2.0)
    assert omega_at(p, 0.0) == 2.0
    assert omega_at(p, 5.0) == 2.0


def test_paul_trap_half_period():
    got = omega_at(PaulTrap(1.0, 1.0, 0.5, 1.0), 0.5)
    assert got == pytest.approx(math.sqrt(1.0 / 3.0), rel=1e-14)


def test_constant_squared():
    assert omega_sq_at(Constant(3.0), 12.3) == 9.0


def test_parametric_resonance_at_origin():
    assert omega_sq_at(ParametricResonance(1.0, 0.1), 0.0) == pytest.approx(1.1, rel=1e-15)


def test_paul_trap_quarter_period():
    assert omega_sq_at(PaulTrap(2.0, 1.0, 0.5, 1.0), 0.25) == pytest.approx(8.0 / 3.0, rel=1e-14)


def test_vectorised_evaluation():
    p = SuddenJump(1.0, 3.0)
    np.testing.assert_array_equal(p.omega(np.array([-1.0, 0.0, 1.0])), [1.0, 3.0, 3.0])


@pytest.mark.parametrize("bad", [
    lambda: Constant(0.0),
    lambda: Constant(float("nan")),
    lambda: SuddenJump(1.0, -2.0),
    lambda: PaulTrap(1.0, 0.5, 0.5, 1.0),
    lambda: PaulTrap(1.0, 1.0, 0.5, 0.0),
    lambda: ParametricResonance(1.0, 1.0),
    lambda: ParametricResonance(1.0, 0.1, eps=0.06),
    lambda: OscillatorConstants(hbar=0.0),
    lambda: OscillatorConstants(m0=-1.0),
    lambda: Tabulated([0.0, 1.0, 1.0], [1.0, 1.0, 1.0]),
    lambda: Tabulated([0.0, 1.0, 2.0], [1.0, 0.0, 1.0]),
])
def test_invalid_parameters_rejected(bad):
    with pytest.raises(ConfigError):
        bad()


def test_tabulated_interpolates_and_guards_range():
    ts = np.linspace(0.0, 2.0, 21)
    p = Tabulated(ts, 1.0 + 0.5 * ts)
    assert p.omega(0.55) == pytest.approx(1.275, rel=1e-12)  # PCHIP is exact on lines
    with pytest.raises(DomainError):
        p.omega(2.5)


@pytest.mark.parametrize("profile", [
    Constant(2.0),
    SuddenJump(1.0, 2.0),
    PaulTrap(1.0, 1.0, 0.5, 3.0),
    ParametricResonance(1.0, 0.1, 0.01),
    Tabulated([0.0, 1.0, 2.0], [1.0, 1.5, 1.2]),
])
def test_dict_round_trip(profile):
    doc = profile_to_dict(profile)
    assert profile_from_dict(doc) == profile


@pytest.mark.parametrize("doc", [
    {},
    {"kind": "harmonic"},
    {"kind": "constant"},
    {"kind": "constant", "omega0": 1.0, "extra": 2},
    {"kind": "paul_trap", "omega0": 1, "beta": 1, "gamma": 2, "tau": 1},
    "constant",
])
def test_bad_documents(doc):
    with pytest.raises(ConfigError):
        profile_from_dict(doc)


def test_sudden_jump_breakpoint():
    p = SuddenJump(1.0, 2.0)
    assert p.breakpoints(-1.0, 1.0) == [0.0]
    assert p.breakpoints(0.0, 1.0) == []


finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)
positive = st.floats(min_value=0.05, max_value=20.0)


@st.composite
def profiles(draw):
    kind = draw(st.sampled_from(["constant", "jump", "paul", "resonance"]))
    w0 = draw(positive)
    if kind == "constant":
        return Constant(w0)
    if kind == "jump":
        return SuddenJump(w0, draw(positive))
    if kind == "paul":
        beta = draw(st.floats(min_value=0.1, max_value=5.0))
        gamma = draw(st.floats(min_value=0.01, max_value=0.95)) * beta
        return PaulTrap(w0, beta, gamma, draw(positive))
    h = draw(st.floats(min_value=0.01, max_value=0.9))
    eps = draw(st.floats(min_value=-0.49, max_value=0.49)) * h * w0
    return ParametricResonance(w0, h, eps)


@settings(max_examples=300, deadline=None)
@given(profiles(), finite)
def test_omega_squared_matches_square_of_omega(p, t):
    w = omega_at(p, t)
    w2 = omega_sq_at(p, t)
    assert w > 0.0
    assert abs(w * w - w2) <= math.ulp(w2)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=0.01, max_value=0.9),
       st.floats(min_value=0.1, max_value=10.0), st.floats(min_value=0.0, max_value=100.0))
def test_paul_trap_period(beta, gfrac, tau, t):
    # bit-exact periodicity is only meaningful when t + tau itself is exact
    assume(Fraction(t + tau) == Fraction(t) + Fraction(tau))
    p = PaulTrap(1.0, beta, gfrac * beta, tau)
    assert omega_at(p, t + tau) == omega_at(p, t)

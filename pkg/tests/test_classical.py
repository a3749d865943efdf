import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from conftest import FIG_TRAP, JUMP, central_d1, interior
from tdho.classical import (ModePair, SwingSolution, complex_mode, solve_homogeneous,
                            swing_theta, wronskian)
from tdho.errors import ConfigError, DomainError, ParameterError
from tdho.ermakov import solve
from tdho.mathieu import mathieu_pair
from tdho.profiles import Constant, OscillatorConstants, ParametricResonance

TOL = 1e-10
ALL = [Constant(1.3), JUMP, FIG_TRAP, ParametricResonance(1.0, 0.1, 0.02)]


def test_constant_pair_is_trig():
    w = 1.7
    pair = solve_homogeneous(Constant(w), 0.0, 10.0, TOL)
    ts = np.linspace(0.0, 10.0, 201)
    np.testing.assert_allclose(pair.u(ts), np.cos(w * ts), atol=1e-9)
    np.testing.assert_allclose(pair.v(ts), np.sin(w * ts) / w, atol=1e-9)


@pytest.mark.parametrize("profile", ALL, ids=lambda p: p.kind)
def test_wronskian_conserved(profile):
    pair = solve_homogeneous(profile, 0.0, 20.0, TOL)
    ts = np.linspace(0.0, 20.0, 401)
    w = wronskian(pair, ts)
    assert pair.wronskian0 == 1.0
    assert np.max(np.abs(w - 1.0)) < 1e-8


@pytest.mark.parametrize("profile", ALL, ids=lambda p: p.kind)
def test_mode_equation_residual(profile):
    t1 = 12.0
    pair = solve_homogeneous(profile, 0.0, t1, TOL)
    h = 0.005
    ts = interior(np.arange(4 * h, t1 - 4 * h, 0.0173), profile.breakpoints(0.0, t1), 4 * h)

    def k(t):
        return 0.3 * pair(t)[0] - 1.1 * pair(t)[2]

    def dk(t):
        return 0.3 * pair(t)[1] - 1.1 * pair(t)[3]

    resid = central_d1(dk, ts, h) + profile.omega_sq(ts) * k(ts)
    kmax = np.max(np.abs(k(np.linspace(0.0, t1, 2001))))
    assert np.max(np.abs(resid)) < 100 * TOL * kmax


def test_paul_trap_pair_is_mathieu():
    tau = FIG_TRAP.tau
    pair = solve_homogeneous(FIG_TRAP, 0.0, 5 * tau, TOL)
    ts = np.linspace(0.0, 5 * tau, 151)
    x = math.pi * ts / tau
    ce, dce, se, dse = mathieu_pair((FIG_TRAP.mathieu_a, FIG_TRAP.mathieu_q), x)
    u, du, v, dv = pair(ts)
    np.testing.assert_allclose(u, ce, atol=1e-8)
    np.testing.assert_allclose(du, dce * math.pi / tau, atol=1e-8)
    # odd solution rescaled to unit initial slope in t
    np.testing.assert_allclose(v, se * tau / math.pi, atol=1e-8)
    np.testing.assert_allclose(dv, dse, atol=1e-8)


def test_jump_pair_against_reference():
    def f(t, y):
        w2 = JUMP.omega_sq(t)
        return [y[1], -w2 * y[0], y[3], -w2 * y[2]]

    ref = solve_ivp(f, (-2.0, 6.0), [1.0, 0.0, 0.0, 1.0], method="DOP853", rtol=1e-13,
                    atol=1e-13, t_eval=[6.0], first_step=1e-3, max_step=0.01)
    pair = solve_homogeneous(JUMP, -2.0, 6.0, TOL)
    np.testing.assert_allclose(pair(6.0), ref.y[:, -1], atol=1e-7)


def test_wronskian_examples():
    w = 2.5
    trig = ModePair.from_functions(lambda t: np.cos(w * t), lambda t: -w * np.sin(w * t),
                                   lambda t: np.sin(w * t), lambda t: w * np.cos(w * t),
                                   (0.0, 10.0))
    assert wronskian(trig, 3.3) == pytest.approx(w, rel=1e-14)
    with pytest.raises(DomainError):
        ModePair.from_functions(np.cos, lambda t: -np.sin(t), lambda t: 2 * np.cos(t),
                                lambda t: -2 * np.sin(t), (0.0, 1.0))


def test_out_of_span_and_bad_tolerance():
    pair = solve_homogeneous(Constant(1.0), 0.0, 1.0)
    with pytest.raises(DomainError):
        pair(2.0)
    with pytest.raises(ConfigError):
        solve_homogeneous(Constant(1.0), 0.0, 1.0, tol=1e-2)
    with pytest.raises(ConfigError):
        solve_homogeneous(Constant(1.0), 1.0, 1.0)


def test_swing_at_origin():
    sol = SwingSolution(0.3, 0.7, 1.0, 0.1, 0.02)
    assert swing_theta(sol, 0.0) == 0.3


def test_swing_exponent_on_resonance():
    assert SwingSolution(1.0, 0.0, 2.0, 0.1).s == pytest.approx(0.1 * 2.0 / 4.0, rel=1e-15)


def test_swing_outside_instability_band():
    with pytest.raises(ParameterError):
        SwingSolution(1.0, 0.0, 1.0, 0.1, 0.05).s


def test_swing_one_period():
    sol = SwingSolution(0.2, 0.0, 1.0, 0.1, 0.03)
    period = 2 * math.pi / (1.0 + 0.03 / 2)
    want = 0.2 * math.exp(2 * math.pi * sol.s / (1.0 + 0.03 / 2))
    assert swing_theta(sol, period) == pytest.approx(want, rel=1e-12)


def test_swing_envelope_grows():
    sol = SwingSolution(1.0, 0.0, 1.0, 0.1)
    period = 2 * math.pi / sol.Omega0
    peaks = []
    for m in range(7):
        ts = np.linspace(m * period, (m + 1) * period, 2001)
        peaks.append(np.max(np.abs(swing_theta(sol, ts))))
    assert all(b > a for a, b in zip(peaks, peaks[1:]))


def test_swing_growth_matches_floquet_rate():
    # numeric monodromy of the driven mode equation gives the true growth exponent;
    # the swing is a first-order approximation in h, so agreement is to O(h)
    h, w0, eps = 0.1, 1.0, 0.01
    prof = ParametricResonance(w0, h, eps)
    period = 2 * math.pi / prof.drive_frequency
    pair = solve_homogeneous(prof, 0.0, period, 1e-12)
    u, du, v, dv = pair(period)
    tr = u + dv
    mu = math.acosh(abs(tr) / 2.0) / period
    s = SwingSolution(1.0, 0.0, w0, h, eps).s
    assert s == pytest.approx(mu, rel=0.1)


def test_complex_mode_static(constants):
    ep = solve(Constant(1.0), constants, 5.0)
    k0 = complex_mode(ep, 0.0)
    assert k0.imag == 0.0
    assert k0.real == pytest.approx(math.sqrt(constants.hbar / 2.0), rel=1e-15)


@pytest.mark.parametrize("profile", [JUMP, FIG_TRAP], ids=lambda p: p.kind)
def test_complex_mode_modulus_and_wronskian(profile, constants):
    ep = solve(profile, constants, 10.0)
    ts = np.linspace(0.5, 9.5, 19)
    ts = interior(ts, profile.breakpoints(0.0, 10.0), 0.05)
    k = complex_mode(ep, ts)
    np.testing.assert_allclose(np.abs(k), math.sqrt(constants.hbar / 2.0) * ep.rho(ts),
                               rtol=1e-14)
    kd = central_d1(lambda t: complex_mode(ep, t), ts, 1e-3)
    w = (k * np.conj(kd) - np.conj(k) * kd).imag
    np.testing.assert_allclose(w, constants.hbar / constants.m0, atol=1e-8)


def test_complex_mode_modulus_is_rho_at_hbar_two():
    c = OscillatorConstants(m0=1.0, hbar=2.0, omega0=1.0)
    ep = solve(JUMP, c, 10.0)
    ts = np.linspace(0.0, 10.0, 11)
    np.testing.assert_allclose(np.abs(complex_mode(ep, ts)), ep.rho(ts), rtol=1e-15)

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from numpy.polynomial.hermite import hermgauss

from conftest import FIG_TRAP, JUMP, PROFILES
from tdho.errors import DomainError
from tdho.ermakov import Method, solve
from tdho.profiles import Constant, OscillatorConstants, SuddenJump
from tdho.squeezing import (SqueezingState, excitation_prob, persistence_prob, squeeze_params,
                            squeeze_state, sudden_jump_persistence, sudden_jump_r,
                            transition_prob, variance_p, variance_x)

GRIFFITHS = 2.0 * math.sqrt(2.0) / 3.0


def test_static_state_is_unsqueezed(constants):
    ep = solve(Constant(1.0), constants, 5.0)
    st_ = squeeze_state(ep, 2.0)
    assert (st_.lam, st_.r, st_.phi) == (1.0, 0.0, None)


def test_sudden_jump_squeezing(unit):
    ep = solve(JUMP, unit, 10.0, method=Method.DIRECT)
    for t in np.linspace(0.1, 10.0, 25):
        assert squeeze_state(ep, t).r == pytest.approx(math.log(2.0) / 2.0, abs=1e-9)


def test_paul_trap_starts_unsqueezed(unit):
    assert squeeze_state(solve(FIG_TRAP, unit, 1.0), 0.0).r == 0.0


@pytest.mark.parametrize("w1,want", [(1.0, 0.0), (2.0, math.log(2.0) / 2.0), (4.0, math.log(2.0))])
def test_sudden_jump_r(w1, want):
    assert sudden_jump_r(1.0, w1) == pytest.approx(want, abs=1e-15)


def test_sudden_jump_r_matches_numeric_solution(constants):
    for w1 in (0.5, 3.0):
        ep = solve(SuddenJump(1.0, w1), constants, 8.0, method=Method.DIRECT)
        rs = [squeeze_state(ep, t).r for t in np.linspace(0.5, 8.0, 11)]
        np.testing.assert_allclose(rs, sudden_jump_r(1.0, w1), atol=1e-9)


def test_static_variances(unit):
    c = OscillatorConstants(m0=2.0, hbar=1.5, omega0=3.0)
    st_ = SqueezingState(0.0, None, 1.0, 3.0, 0.0)
    for n in range(4):
        assert variance_x(n, st_, c) == pytest.approx((n + 0.5) * 1.5 / 6.0, rel=1e-15)
        assert variance_p(n, st_, c) == pytest.approx((n + 0.5) * 1.5 * 6.0, rel=1e-15)


@pytest.mark.parametrize("r", [0.1, 0.7, 2.0])
def test_zero_phase_variances(r):
    c = OscillatorConstants(m0=1.3, hbar=0.7)
    w = 1.9
    st_ = SqueezingState(r, 0.0, math.cosh(r) ** 2, w, 0.0)
    assert variance_x(2, st_, c) == pytest.approx(math.exp(2 * r) * 2.5 * 0.7 / (1.3 * w), rel=1e-9)
    assert variance_p(2, st_, c) == pytest.approx(math.exp(-2 * r) * 2.5 * 0.7 * 1.3 * w, rel=1e-9)


@pytest.mark.parametrize("name,profile,t1", PROFILES, ids=[p[0] for p in PROFILES])
def test_variances_follow_rho(name, profile, t1, constants):
    ep = solve(profile, constants, t1, method=Method.DIRECT)
    for t in np.linspace(0.0, t1, 17):
        st_ = squeeze_state(ep, t)
        rho, rhodot = ep.evaluate(t)
        for n in (0, 3):
            vx = (n + 0.5) * constants.hbar * rho**2
            vp = (n + 0.5) * constants.hbar * (rho**-2 + (constants.m0 * rhodot) ** 2)
            assert variance_x(n, st_, constants) == pytest.approx(vx, rel=1e-9)
            assert variance_p(n, st_, constants) == pytest.approx(vp, rel=1e-9)


def test_transition_examples():
    for r in (0.0, 0.3, 1.7):
        assert transition_prob(0, r) == 1.0 / math.cosh(r)
    assert transition_prob(2, 0.0) == 0.0 and transition_prob(8, 0.0) == 0.0
    r = 0.8
    assert transition_prob(2, r) == pytest.approx(math.tanh(r) ** 2 / (2 * math.cosh(r)), rel=1e-15)


def test_odd_or_negative_levels_rejected():
    with pytest.raises(DomainError):
        transition_prob(3, 0.5)
    with pytest.raises(DomainError):
        transition_prob(-2, 0.5)
    with pytest.raises(DomainError):
        transition_prob(2, -0.1)


def _hermite_function(n, x):
    """Normalised oscillator eigenfunction (m = hbar = omega = 1) by recurrence."""
    psi_prev = np.zeros_like(x)
    psi = np.pi**-0.25 * np.exp(-x * x / 2)
    for k in range(n):
        psi_prev, psi = psi, math.sqrt(2.0 / (k + 1)) * x * psi - math.sqrt(k / (k + 1)) * psi_prev
    return psi


@pytest.mark.parametrize("w1", [2.0, 4.0, 0.3])
def test_transition_probabilities_are_jump_overlaps(w1):
    # |<nu; omega1 | 0; omega0>|^2 by Gauss-Hermite quadrature
    nodes, weights = hermgauss(200)
    r = sudden_jump_r(1.0, w1)
    s = math.sqrt(w1)
    # integrand without the exp(-x^2) weight: the two Gaussians give exp(-(1 + w1) x^2 / 2)
    x = nodes * math.sqrt(2.0 / (1.0 + w1))
    jac = math.sqrt(2.0 / (1.0 + w1))
    ground = np.pi**-0.25 * np.ones_like(x)
    for nu in range(0, 13, 2):
        excited = s**0.5 * _hermite_function(nu, s * x) * np.exp(w1 * x * x / 2)
        amp = jac * np.sum(weights * ground * excited)
        assert transition_prob(nu, r) == pytest.approx(amp * amp, rel=1e-10, abs=1e-15)


@pytest.mark.parametrize("r", [0.1, 0.5, 1.0, 2.0])
def test_completeness(r):
    terms, nu = [], 0
    while True:
        p = transition_prob(nu, r)
        terms.append(p)
        if nu and p < 1e-14:
            break
        nu += 2
    assert abs(math.fsum(terms) - 1.0) < 1e-10


def test_log_branch_continuity():
    r = 1.3
    th2 = math.tanh(r) ** 2
    for nu in range(30, 60, 2):
        ratio = transition_prob(nu + 2, r) / transition_prob(nu, r)
        assert ratio == pytest.approx(th2 * (nu + 1) / (nu + 2), rel=1e-12)


def test_persistence_examples():
    assert persistence_prob(0.0) == 1.0 and excitation_prob(0.0) == 0.0
    assert persistence_prob(sudden_jump_r(1.0, 2.0)) == pytest.approx(GRIFFITHS, rel=1e-15)
    assert persistence_prob(math.log(2.0)) == pytest.approx(0.8, rel=1e-15)


@pytest.mark.parametrize("w1,want", [(1.0, 1.0), (2.0, GRIFFITHS), (100.0, 20.0 / 101.0)])
def test_sudden_jump_persistence(w1, want):
    assert sudden_jump_persistence(1.0, w1) == pytest.approx(want, rel=1e-15)


positive = st.floats(min_value=0.05, max_value=20.0)


@given(positive, positive)
def test_persistence_symmetric(a, b):
    assert sudden_jump_persistence(a, b) == sudden_jump_persistence(b, a)


@given(st.floats(min_value=0.0, max_value=50.0))
def test_probabilities_add_to_one(r):
    assert persistence_prob(r) + excitation_prob(r) == 1.0


@settings(max_examples=300)
@given(st.floats(0.05, 5.0), st.floats(-5.0, 5.0), st.floats(0.1, 5.0), st.floats(0.2, 5.0),
       st.floats(0.2, 3.0), st.integers(0, 6))
def test_state_properties(rho, rhodot, omega, m0, hbar, n):
    r, phi, lam = squeeze_params(rho, rhodot, omega, m0)
    assert lam >= 1.0
    # the (r, phi) route cancels 2 lambda - 1 down to O(1); keep its conditioning sane
    assume(lam <= 20.0)
    assert (r == 0.0) == (lam == 1.0)
    st_ = SqueezingState(float(r), None if np.isnan(phi) else float(phi), float(lam), omega, 0.0)
    c = OscillatorConstants(m0=m0, hbar=hbar)
    vx, vp = variance_x(n, st_, c), variance_p(n, st_, c)
    bound = (hbar * (n + 0.5)) ** 2
    assert vx * vp >= bound * (1.0 - 1e-12)
    assert vx == pytest.approx((n + 0.5) * hbar * rho * rho, rel=1e-9)
    assert vp == pytest.approx((n + 0.5) * hbar * (rho**-2 + (m0 * rhodot) ** 2), rel=1e-9)


def test_vectorised_params_flag_undefined_phase():
    r, phi, lam = squeeze_params([1.0, 1.2], [0.0, 0.3], [1.0, 1.0], 1.0)
    assert r[0] == 0.0 and np.isnan(phi[0])
    assert r[1] > 0.0 and np.isfinite(phi[1])

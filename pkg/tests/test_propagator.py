import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from adiabatic_passage.grid import TimeGrid
from adiabatic_passage.propagator import (
    AmplitudeState,
    BlochVector,
    IntegrationError,
    bloch_from_amplitudes,
    picture_residual,
    propagate_amplitudes,
    propagate_bloch,
    rwa_hamiltonian,
)
from adiabatic_passage.pulse_shapes import (
    Constant,
    DriveProfile,
    Gaussian,
    Negated,
    OddGaussian,
    Recombined,
    Scaled,
    SechPairEven,
    SechPairOdd,
    Zero,
)
from adiabatic_passage.scenario import preset

# Fixed-step RK4 reference (tests/oracles.py), Richardson-extrapolated over 80k/160k steps on
# [-10, 10]; the two step sizes agree to 3.5e-13.
FIG2_LEFT_P2_ORACLE = 0.99998194551892
FIG1_LEFT_P2_ORACLE = 0.9999933186543246


def test_hamiltonian_entries():
    np.testing.assert_array_equal(rwa_hamiltonian(0.0, 0.0), np.zeros((2, 2)))
    np.testing.assert_array_equal(rwa_hamiltonian(2.0, 0.0), [[0, 1], [1, 0]])
    h = rwa_hamiltonian(3.0, 4.0)
    np.testing.assert_array_equal(h, h.conj().T)
    np.testing.assert_allclose(np.linalg.eigvalsh(h), [-2.5, 2.5], rtol=1e-15)


@pytest.mark.parametrize(
    "c1, c2, expected",
    [(1, 0, (0, 0, -1)), (0, 1, (0, 0, 1)), (1 / math.sqrt(2), 1 / math.sqrt(2), (1, 0, 0))],
)
def test_bloch_from_amplitudes(c1, c2, expected):
    b = bloch_from_amplitudes(AmplitudeState(complex(c1), complex(c2)))
    assert (b.u, b.v, b.w) == pytest.approx(expected, abs=1e-15)


def test_resonant_pi_pulse():
    duration = 2.3
    profile = DriveProfile(Constant(math.pi / duration), Zero())
    traj = propagate_amplitudes(profile, TimeGrid(0.0, duration, 11))
    assert abs(traj.p2[-1] - 1.0) <= 1e-8


def test_rabi_formula_constant_drive():
    omega, delta = 1.7, -0.9
    profile = DriveProfile(Constant(omega), Constant(delta))
    traj = propagate_amplitudes(profile, TimeGrid(0.0, 12.0, 301))
    rate = math.hypot(omega, delta)
    expected = omega**2 / rate**2 * np.sin(rate * traj.t / 2) ** 2
    assert np.max(np.abs(traj.p2 - expected)) <= 1e-8


def test_zero_torque_keeps_vector():
    start = BlochVector(0.6, 0.0, -0.8)
    traj = propagate_bloch(DriveProfile(Zero(), Zero()), TimeGrid(-5, 5, 51), start)
    np.testing.assert_array_equal(traj.bloch, np.tile(start.as_array()[:, None], (1, 51)))


def test_resonant_rotation_about_u():
    omega = 1.3
    traj = propagate_bloch(DriveProfile(Constant(omega), Zero()), TimeGrid(0.0, 9.0, 181))
    np.testing.assert_allclose(traj.w, -np.cos(omega * traj.t), atol=1e-9)
    np.testing.assert_allclose(traj.v, np.sin(omega * traj.t), atol=1e-9)


def test_fig1_right_exact_return():
    traj = propagate_amplitudes(preset("fig1_right").profile)
    assert abs(traj.p1[-1] - 1.0) <= 1e-6


def test_fig2_left_matches_oracle():
    traj = propagate_amplitudes(preset("fig2_left").profile)
    assert abs(traj.p2[-1] - FIG2_LEFT_P2_ORACLE) <= 1e-6


def test_fig1_left_bloch_matches_amplitude_oracle():
    traj = propagate_bloch(preset("fig1_left").profile, TimeGrid(rel_tol=1e-12, abs_tol=1e-14))
    assert abs(traj.w[-1] - (2 * FIG1_LEFT_P2_ORACLE - 1)) <= 1e-8


def test_trajectory_endpoints_and_columns():
    grid = TimeGrid(-3, 4, 8)
    traj = propagate_amplitudes(DriveProfile(Gaussian(2), OddGaussian(1)), grid)
    assert traj.t[0] == -3 and traj.t[-1] == 4 and np.all(np.diff(traj.t) > 0)
    assert traj.columns().shape == (8, 12)


def test_rejects_unnormalized_initial_states():
    with pytest.raises(ValueError):
        propagate_amplitudes(DriveProfile(Zero(), Zero()), initial=AmplitudeState(1.0, 0.1))
    with pytest.raises(ValueError):
        propagate_bloch(DriveProfile(Zero(), Zero()), initial=BlochVector(0, 0, -0.9))


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_integration_failure_reports_time():
    # a drive that blows up in the middle of the window
    class Spike(Constant):
        def _eval(self, t, xp):
            return 1e300 if t > 0.5 else 1.0

    with pytest.raises(IntegrationError) as info:
        propagate_amplitudes(DriveProfile(Spike(), Zero()), TimeGrid(0.0, 1.0, 3, rel_tol=1e-10))
    assert 0.0 <= info.value.time <= 1.0


SHORT = TimeGrid(-8, 8, 161)


@pytest.mark.parametrize("amplitude", [1e-100, 1e-140, 1e-150, 1e-158, 1e-200, 1e-300, 5e-324])
def test_vanishing_drive_leaves_state_alone(amplitude):
    # derivatives this small used to drive the step-size control into underflow
    profile = DriveProfile(OddGaussian(amplitude, 1.0), OddGaussian(amplitude, 1.0))
    for traj in (propagate_amplitudes(profile, SHORT), propagate_bloch(profile, SHORT)):
        assert traj.p1[-1] == pytest.approx(1.0, abs=1e-15)


# ---------------------------------------------------------------- properties

amps = st.floats(-15, 15)
widths = st.floats(0.5, 2.5)
delays = st.floats(0.0, 4.0)
odd_envelopes = st.one_of(
    st.builds(OddGaussian, amps, widths),
    st.builds(SechPairOdd, st.floats(-3, 3), delays),
    st.builds(lambda e, k: Scaled(e, k), st.builds(OddGaussian, amps, widths), st.floats(-2, 2)),
    st.builds(Negated, st.builds(SechPairOdd, st.floats(-3, 3), delays)),
)
any_envelopes = st.one_of(
    odd_envelopes,
    st.builds(Gaussian, amps, widths),
    st.builds(SechPairEven, st.floats(-3, 3), delays),
    st.builds(Recombined, st.builds(Gaussian, amps, widths), delays),
)
states = st.tuples(st.floats(0, math.pi), st.floats(0, 2 * math.pi)).map(
    lambda a: AmplitudeState(complex(math.cos(a[0] / 2)), complex(math.sin(a[0] / 2) * np.exp(1j * a[1])))
)
@given(odd_envelopes, odd_envelopes, states)
def test_exact_return_for_odd_hamiltonians(rabi, detuning, initial):
    traj = propagate_amplitudes(DriveProfile(rabi, detuning), SHORT, initial)
    assert abs(traj.p1[-1] - abs(initial.c1) ** 2) <= 1e-6
    # the whole propagator is the identity, not only the populations
    assert abs(traj.c1[-1] - initial.c1) <= 1e-6 and abs(traj.c2[-1] - initial.c2) <= 1e-6


@given(any_envelopes, any_envelopes, states)
def test_picture_equivalence(rabi, detuning, initial):
    profile = DriveProfile(rabi, detuning)
    amp = propagate_amplitudes(profile, SHORT, initial)
    vec = propagate_bloch(profile, SHORT, bloch_from_amplitudes(initial))
    assert picture_residual(amp, vec) <= 1e-8
    assert amp.norm_drift() <= 1e-9 and vec.norm_drift() <= 1e-9


@given(any_envelopes, any_envelopes, states)
def test_sign_reversal_mirror(rabi, detuning, initial):
    b0 = bloch_from_amplitudes(initial)
    profile = DriveProfile(rabi, detuning)
    forward = propagate_bloch(profile, SHORT, BlochVector(-b0.u, b0.v, -b0.w))
    mirrored = propagate_bloch(profile.negated(), SHORT, b0)
    np.testing.assert_allclose(mirrored.u, -forward.u, atol=1e-8)
    np.testing.assert_allclose(mirrored.v, forward.v, atol=1e-8)
    np.testing.assert_allclose(mirrored.w, -forward.w, atol=1e-8)


@given(st.floats(-8, 8), st.floats(-8, 8), st.floats(0.05, 6))
def test_rabi_formula_property(omega, delta, t_end):
    if math.hypot(omega, delta) < 1e-3:
        return
    traj = propagate_amplitudes(DriveProfile(Constant(omega), Constant(delta)), TimeGrid(0.0, t_end, 5))
    rate = math.hypot(omega, delta)
    assert traj.p2[-1] == pytest.approx(omega**2 / rate**2 * math.sin(rate * t_end / 2) ** 2, abs=1e-8)

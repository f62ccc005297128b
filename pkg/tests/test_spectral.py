import math
import warnings

import numpy as np
import pytest

from adiabatic_passage.grid import TimeGrid
from adiabatic_passage.pulse_shapes import (
    Constant,
    Gaussian,
    Negated,
    OddGaussian,
    Recombined,
    Scaled,
    SechPairEven,
    SechPairOdd,
    Tabulated,
    Zero,
    peak,
    pulse_area,
)
from adiabatic_passage.spectral import Spectrum, SpectrumWarning, area_from_spectrum, spectrum

WINDOW = TimeGrid()
DETUNINGS = np.linspace(-12, 12, 25)
FAMILIES = [
    Zero(),
    Constant(2.5),
    Gaussian(30, 1),
    OddGaussian(-40, 2.5),
    SechPairEven(4, 3),
    SechPairOdd(4, 3),
    Recombined(Gaussian(5, 1), 3),
    Tabulated.sample(Gaussian(3, 1.5), -8, 8, 641),
    Scaled(SechPairEven(1, 2), -0.5),
    Negated(Gaussian(1, 0.8)),
]


def _tol(env):
    return 1e-8 * peak(env, WINDOW) * WINDOW.length / (2 * math.pi)


def test_gaussian_closed_form():
    amp = 30.0
    spec = spectrum(Gaussian(amp, 1.0), DETUNINGS)
    expected = amp * math.sqrt(math.pi) / (2 * math.pi) * np.exp(-(DETUNINGS**2) / 4)
    np.testing.assert_allclose(spec.values.real, expected, atol=_tol(Gaussian(amp)))
    np.testing.assert_allclose(spec.values.imag, 0.0, atol=_tol(Gaussian(amp)))
    assert spec.at(0.0).real == pytest.approx(amp * math.sqrt(math.pi) / (2 * math.pi), abs=1e-12)


def test_odd_gaussian_closed_form():
    # FT of t exp(-t^2) is i (sqrt(pi)/2) D exp(-D^2/4)
    spec = spectrum(OddGaussian(2.0, 1.0), DETUNINGS)
    expected = 2.0 * 1j * math.sqrt(math.pi) / 2 * DETUNINGS * np.exp(-(DETUNINGS**2) / 4) / (2 * math.pi)
    np.testing.assert_allclose(spec.values, expected, atol=1e-11)


def test_recombined_zero_at_resonance():
    spec = spectrum(Recombined(Gaussian(30, 1), 3), [0.0], TimeGrid(-10, 13))
    assert abs(spec.values[0]) <= 1e-8


def test_zero_envelope_spectrum():
    assert not np.any(spectrum(Zero(), DETUNINGS).values)


def test_empty_detunings_rejected():
    with pytest.raises(ValueError):
        spectrum(Gaussian(), [])


@pytest.mark.parametrize("env", FAMILIES, ids=lambda e: type(e).__name__)
def test_conjugate_symmetry(env):
    spec = spectrum(env, DETUNINGS)
    scale = max(np.max(np.abs(spec.values)), 1e-300)
    assert np.max(np.abs(spec.values[::-1] - np.conj(spec.values))) <= 1e-8 * scale


@pytest.mark.parametrize("env", FAMILIES, ids=lambda e: type(e).__name__)
def test_area_identity(env):
    assert area_from_spectrum(spectrum(env, [0.0])) == pytest.approx(pulse_area(env), abs=1e-7)


def test_area_examples():
    assert area_from_spectrum(spectrum(Gaussian(30, 1), [0.0])) == pytest.approx(30 * math.sqrt(math.pi), rel=1e-12)
    assert abs(area_from_spectrum(spectrum(OddGaussian(7, 1), [-1.0, 0.0, 1.0]))) <= 1e-12
    assert abs(area_from_spectrum(spectrum(SechPairOdd(4, 3), [0.0]))) <= 1e-8


def test_area_requires_resonant_point():
    with pytest.raises(ValueError):
        area_from_spectrum(spectrum(Gaussian(), [1.0, 2.0]))


def test_area_flags_complex_resonant_value():
    spec = Spectrum(np.array([0.0, 1.0]), np.array([1.0 + 0.1j, 0.5]))
    with pytest.warns(SpectrumWarning):
        assert area_from_spectrum(spec) == pytest.approx(2 * math.pi)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        area_from_spectrum(Spectrum(np.array([0.0]), np.array([1.0 + 0j])))


@pytest.mark.parametrize("base", [Gaussian(5, 1), OddGaussian(-3, 1.5), SechPairEven(1, 2)], ids=repr)
@pytest.mark.parametrize("delay", [0.7, 3.0])
def test_shift_phase_law(base, delay):
    # wide window so both the base and its delayed copy fit
    window = TimeGrid(-30, 30)
    d = np.linspace(-6, 6, 13)
    lhs = spectrum(Recombined(base, delay), d, window).values
    rhs = (np.exp(1j * d * delay) - 1) * spectrum(base, d, window).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-8 * peak(base, window) * window.length / (2 * math.pi)


def test_csv_export(tmp_path):
    spec = spectrum(Gaussian(2, 1), [-1.0, 0.0, 1.0])
    path = spec.to_csv(tmp_path / "s.csv")
    rows = path.read_text().splitlines()
    assert rows[0] == "delta,re,im,magnitude"
    d, re, im, mag = map(float, rows[2].split(","))
    assert (d, re, im) == (0.0, spec.values[1].real, spec.values[1].imag) and mag == abs(spec.values[1])

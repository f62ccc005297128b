"""Fourier spectrum of a pulse, ``(1/2pi) int dt exp(i Delta t) Omega(t)``, and the area read off at Delta = 0."""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import TimeGrid
from .pulse_shapes import Envelope, _quad, peak


class SpectrumWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Spectrum:
    detunings: np.ndarray
    values: np.ndarray

    def at(self, detuning: float) -> complex:
        hits = np.flatnonzero(self.detunings == detuning)
        if hits.size == 0:
            raise KeyError(detuning)
        return complex(self.values[hits[0]])

    def to_csv(self, path) -> Path:
        path = Path(path)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["delta", "re", "im", "magnitude"])
            for d, z in zip(self.detunings, self.values):
                writer.writerow([format(float(x), ".17g") for x in (d, z.real, z.imag, abs(z))])
        return path


def spectrum(env: Envelope, detunings, window: TimeGrid | None = None) -> Spectrum:
    """Spectrum at each detuning by oscillatory (QAWO) quadrature over the window."""
    window = window or TimeGrid()
    detunings = np.atleast_1d(np.asarray(detunings, dtype=float))
    if detunings.size == 0:
        raise ValueError("empty detuning list")
    scale = peak(env, window)
    values = np.zeros(detunings.size, dtype=complex)
    if scale == 0.0:
        return Spectrum(detunings, values)
    epsabs = 1e-11 * scale * window.length
    breaks = env.breakpoints()
    for k, d in enumerate(detunings):
        # the weighted (QAWO) rule is used at d = 0 as well, so the resonant value
        # stays independent of the plain quadrature behind pulse_area
        re = _quad(env, window, breaks, epsabs, weight="cos", wvar=d)
        im = _quad(env, window, breaks, epsabs, weight="sin", wvar=d) if d != 0.0 else 0.0
        values[k] = complex(re, im) / (2.0 * np.pi)
    return Spectrum(detunings, values)


def area_from_spectrum(spec: Spectrum) -> float:
    """Pulse area as 2pi times the resonant spectral component; warns if that component is not real."""
    try:
        z = spec.at(0.0)
    except KeyError:
        raise ValueError("spectrum has no point at zero detuning") from None
    scale = float(np.max(np.abs(spec.values)))
    if abs(z.imag) > 1e-8 * scale:
        warnings.warn(f"resonant spectral component has imaginary part {z.imag:.3g}", SpectrumWarning, stacklevel=2)
    return 2.0 * np.pi * z.real

"""Pulse envelopes, drive profiles, pulse areas and time-parity classification.

All times are in units of the characteristic time T and all envelope values
are angular frequencies in units of 1/T. An envelope is an immutable callable:
``env(t)`` returns a float for a scalar ``t`` and an array for an array ``t``.
The scalar path goes through :mod:`math`, which keeps the ODE right-hand side
cheap; the array path goes through numpy.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import ClassVar

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .grid import TimeGrid

__all__ = [
    "Envelope",
    "Zero",
    "Constant",
    "Gaussian",
    "OddGaussian",
    "SechPairEven",
    "SechPairOdd",
    "Recombined",
    "Tabulated",
    "Scaled",
    "Negated",
    "DriveProfile",
    "SymmetryClass",
    "evaluate",
    "peak",
    "pulse_area",
    "classify_symmetry",
    "envelope_from_dict",
    "load_tabulated_csv",
]

_FAMILIES: dict[str, type["Envelope"]] = {}


def _sech(x, xp):
    # overflow-free form of 1/cosh(x)
    a = xp.exp(-abs(x)) if xp is math else xp.exp(-xp.abs(x))
    return 2.0 * a / (1.0 + a * a)


class Envelope:
    """Base class of the envelope families. Subclasses implement ``_eval(t, xp)``."""

    family: ClassVar[str] = ""

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        # subclasses that inherit a family name do not take over its registration
        if "family" in cls.__dict__ and cls.family:
            _FAMILIES[cls.family] = cls

    def _eval(self, t, xp):
        raise NotImplementedError

    def __call__(self, t):
        if isinstance(t, (float, int)) or (np.ndim(t) == 0 and not isinstance(t, np.ndarray)):
            v = self._eval(float(t), math)
            # inf * 0 can only occur at astronomically large |t| where every family decays to 0
            return 0.0 if v != v else float(v)
        t = np.asarray(t, dtype=float)
        with np.errstate(invalid="ignore", over="ignore"):
            v = np.asarray(self._eval(t, np), dtype=float)
        v = np.where(np.isnan(v), 0.0, v)
        return np.broadcast_to(v, t.shape).copy()

    def scalar(self):
        """Plain float -> float function, the fast path for ODE right-hand sides."""
        ev = self._eval

        def f(t: float) -> float:
            v = ev(t, math)
            return v if v == v else 0.0

        return f

    def breakpoints(self) -> tuple[float, ...]:
        """Times at which the envelope is not smooth (quadrature splits there)."""
        return ()

    def to_dict(self) -> dict:
        out: dict = {"family": self.family}
        for f in fields(self):
            if not f.init:
                continue
            value = getattr(self, f.name)
            if isinstance(value, Envelope):
                value = value.to_dict()
            elif isinstance(value, tuple):
                value = list(value)
            out[f.name] = value
        return out


@dataclass(frozen=True)
class Zero(Envelope):
    family: ClassVar[str] = "zero"

    def _eval(self, t, xp):
        return 0.0 * t


@dataclass(frozen=True)
class Constant(Envelope):
    family: ClassVar[str] = "constant"
    amplitude: float = 0.0

    def _eval(self, t, xp):
        return self.amplitude + 0.0 * t


@dataclass(frozen=True)
class Gaussian(Envelope):
    """``A exp(-(t/s)^2)``."""

    family: ClassVar[str] = "gaussian"
    amplitude: float = 1.0
    width_scale: float = 1.0

    def _eval(self, t, xp):
        x = t / self.width_scale
        return self.amplitude * xp.exp(-x * x)


@dataclass(frozen=True)
class OddGaussian(Envelope):
    """``A t exp(-(t/s)^2)``: a Gaussian times t, so zero area by construction."""

    family: ClassVar[str] = "odd_gaussian"
    amplitude: float = 1.0
    width_scale: float = 1.0

    def _eval(self, t, xp):
        x = t / self.width_scale
        return self.amplitude * t * xp.exp(-x * x)


@dataclass(frozen=True)
class SechPairEven(Envelope):
    """``A t^2 [sech(t + delay) + sech(t - delay)]``; touches zero at t = 0 without changing sign."""

    family: ClassVar[str] = "sech_pair_even"
    amplitude: float = 1.0
    delay: float = 3.0

    def _eval(self, t, xp):
        return self.amplitude * t * t * (_sech(t + self.delay, xp) + _sech(t - self.delay, xp))


@dataclass(frozen=True)
class SechPairOdd(Envelope):
    """``A t^2 [sech(t - delay) - sech(t + delay)]``."""

    family: ClassVar[str] = "sech_pair_odd"
    amplitude: float = 1.0
    delay: float = 3.0

    def _eval(self, t, xp):
        return self.amplitude * t * t * (_sech(t - self.delay, xp) - _sech(t + self.delay, xp))


@dataclass(frozen=True)
class Recombined(Envelope):
    """Beam-splitter recombination ``f(t - delay) - f(t)`` of a base pulse ``f``.

    The delayed copy is phase-shifted by pi, so the result has zero area whenever
    the base pulse has a finite one.
    """

    family: ClassVar[str] = "recombined"
    base: Envelope = field(default_factory=lambda: Gaussian())
    delay: float = 0.0

    def _eval(self, t, xp):
        return self.base._eval(t - self.delay, xp) - self.base._eval(t, xp)

    def breakpoints(self):
        inner = self.base.breakpoints()
        return tuple(sorted(set(inner) | {b + self.delay for b in inner}))


@dataclass(frozen=True)
class Tabulated(Envelope):
    """Samples joined by a natural cubic spline; zero outside the sampled range."""

    family: ClassVar[str] = "tabulated"
    times: tuple[float, ...] = ()
    values: tuple[float, ...] = ()
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        times = tuple(float(x) for x in self.times)
        values = tuple(float(x) for x in self.values)
        if len(times) != len(values):
            raise ValueError("times and values differ in length")
        if len(times) < 2:
            raise ValueError("a tabulated envelope needs at least two samples")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise ValueError("tabulated samples must be finite")
        if np.any(np.diff(times) <= 0):
            raise ValueError("tabulated times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_spline", CubicSpline(times, values, bc_type="natural"))

    @classmethod
    def sample(cls, env: Envelope, t_start: float, t_end: float, n: int) -> "Tabulated":
        ts = np.linspace(t_start, t_end, n)
        return cls(tuple(ts), tuple(env(ts)))

    def _eval(self, t, xp):
        lo, hi = self.times[0], self.times[-1]
        if xp is math:
            return float(self._spline(t)) if lo <= t <= hi else 0.0
        inside = (t >= lo) & (t <= hi)
        return np.where(inside, self._spline(np.clip(t, lo, hi)), 0.0)

    def breakpoints(self):
        # every knot: the spline is a cubic between knots, which Gauss-Kronrod integrates exactly
        return self.times


@dataclass(frozen=True)
class Scaled(Envelope):
    family: ClassVar[str] = "scaled"
    inner: Envelope = field(default_factory=Zero)
    factor: float = 1.0

    def _eval(self, t, xp):
        return self.factor * self.inner._eval(t, xp)

    def breakpoints(self):
        return self.inner.breakpoints()


@dataclass(frozen=True)
class Negated(Envelope):
    family: ClassVar[str] = "negated"
    inner: Envelope = field(default_factory=Zero)

    def _eval(self, t, xp):
        return -self.inner._eval(t, xp)

    def breakpoints(self):
        return self.inner.breakpoints()


def evaluate(env: Envelope, t):
    """Envelope value at ``t`` (units of 1/T)."""
    return env(t)


def load_tabulated_csv(path) -> Tabulated:
    """Read a two-column ``time,value`` CSV (header row optional) into a :class:`Tabulated`."""
    times, values = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                t, v = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if i == 0:
                    continue  # header
                raise ValueError(f"{path}: malformed row {i + 1}: {row!r}") from None
            times.append(t)
            values.append(v)
    return Tabulated(tuple(times), tuple(values))


def envelope_from_dict(data: dict, base_dir: Path | None = None) -> Envelope:
    """Inverse of :meth:`Envelope.to_dict`. Tabulated envelopes may give a CSV ``path``."""
    data = dict(data)
    try:
        family = data.pop("family")
        cls = _FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown or missing envelope family in {data!r}") from None
    if cls is Tabulated and "path" in data:
        path = Path(data.pop("path"))
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        if data:
            raise ValueError(f"unexpected keys for tabulated path envelope: {sorted(data)}")
        return load_tabulated_csv(path)
    allowed = {f.name for f in fields(cls) if f.init}
    unknown = set(data) - allowed
    if unknown:
        raise ValueError(f"unexpected keys for {family}: {sorted(unknown)}")
    kwargs = {}
    for name, value in data.items():
        if isinstance(value, dict):
            value = envelope_from_dict(value, base_dir)
        elif isinstance(value, list):
            value = tuple(float(x) for x in value)
        elif isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"{family}.{name} must be numeric, got {value!r}")
        else:
            value = float(value)
        kwargs[name] = value
    return cls(**kwargs)


@dataclass(frozen=True)
class DriveProfile:
    """Rabi frequency and detuning envelopes sharing the time unit T (seconds, or 1.0 if dimensionless)."""

    rabi: Envelope
    detuning: Envelope
    time_unit_T: float = 1.0

    def rates(self, t: float) -> tuple[float, float]:
        return self.rabi(t), self.detuning(t)

    def sample(self, times) -> tuple[np.ndarray, np.ndarray]:
        return self.rabi(times), self.detuning(times)

    def scaled(self, rabi_factor: float = 1.0, detuning_factor: float = 1.0) -> "DriveProfile":
        return DriveProfile(
            Scaled(self.rabi, rabi_factor), Scaled(self.detuning, detuning_factor), self.time_unit_T
        )

    def negated(self) -> "DriveProfile":
        return DriveProfile(Negated(self.rabi), Negated(self.detuning), self.time_unit_T)

    def to_dict(self) -> dict:
        return {
            "rabi": self.rabi.to_dict(),
            "detuning": self.detuning.to_dict(),
            "time_unit_T": self.time_unit_T,
        }

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> "DriveProfile":
        return cls(
            envelope_from_dict(data["rabi"], base_dir),
            envelope_from_dict(data["detuning"], base_dir),
            float(data.get("time_unit_T", 1.0)),
        )


class SymmetryClass(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    NEITHER = "neither"


def peak(env: Envelope, window: TimeGrid, n_samples: int = 8001) -> float:
    """Largest |env| over a dense sampling of the window."""
    ts = np.linspace(window.t_start, window.t_end, max(n_samples, window.n_output))
    return float(np.max(np.abs(env(ts))))


def _segments(window: TimeGrid, breaks) -> list[tuple[float, float]]:
    cuts = sorted({window.t_start, window.t_end} | {b for b in breaks if window.t_start < b < window.t_end})
    return list(zip(cuts[:-1], cuts[1:]))


def _quad(func, window: TimeGrid, breaks, epsabs: float, **kwargs) -> float:
    total = 0.0
    for a, b in _segments(window, breaks):
        value, _ = integrate.quad(func, a, b, epsabs=epsabs, epsrel=1e-13, limit=500, **kwargs)
        total += value
    return total


def pulse_area(env: Envelope, window: TimeGrid | None = None) -> float:
    """Time integral of the envelope over the window (radians), by adaptive Gauss-Kronrod quadrature.

    The caller chooses a window outside of which the envelope is negligible.
    """
    window = window or TimeGrid()
    scale = peak(env, window)
    if scale == 0.0:
        return 0.0
    return _quad(env, window, env.breakpoints(), epsabs=1e-11 * scale * window.length)


def classify_symmetry(env: Envelope, window: TimeGrid | None = None, tol: float = 1e-9) -> SymmetryClass:
    """Even/Odd/Neither under t -> -t, judged by residuals relative to the peak on the window samples.

    The all-zero envelope is Even.
    """
    window = window or TimeGrid()
    if not window.is_symmetric:
        raise ValueError(f"symmetry needs a window centred on t=0, got [{window.t_start}, {window.t_end}]")
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    ts = np.linspace(0.0, window.t_end, max(window.n_output, 2001))
    plus, minus = env(ts), env(-ts)
    scale = max(np.max(np.abs(plus)), np.max(np.abs(minus)))
    if scale == 0.0:
        return SymmetryClass.EVEN
    if np.max(np.abs(plus - minus)) <= tol * scale:
        return SymmetryClass.EVEN
    if np.max(np.abs(plus + minus)) <= tol * scale:
        return SymmetryClass.ODD
    return SymmetryClass.NEITHER

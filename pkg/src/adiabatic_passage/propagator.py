"""Time evolution of the driven two-state system in two independent pictures.

* amplitude picture: ``i dC/dt = H(t) C`` with the symmetrized RWA Hamiltonian
  ``H = (1/2) [[-Delta, Omega], [Omega, Delta]]`` (hbar = 1, time in units of T);
* vector picture: the torque equation ``dB/dt = Q x B`` with ``Q = (Omega, 0, Delta)``.

Both are integrated with the same adaptive embedded Runge-Kutta scheme (DOP853),
stopping exactly at each output time. Neither is derived from the
other, so comparing them is a genuine consistency check.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.integrate import ode

from . import analysis
from .grid import TimeGrid
from .pulse_shapes import DriveProfile

MAX_STEPS = 1_000_000
TRAJECTORY_COLUMNS = ("t", "omega", "delta", "eps_minus", "eps_plus", "theta", "u", "v", "w", "p1", "p2", "a0")


class IntegrationError(RuntimeError):
    """The integrator gave up; ``time`` is where it stopped."""

    def __init__(self, message: str, time: float):
        super().__init__(f"{message} (at t = {time:.17g} T)")
        self.time = time


@dataclass(frozen=True)
class AmplitudeState:
    c1: complex
    c2: complex

    @classmethod
    def ground(cls) -> "AmplitudeState":
        return cls(1.0 + 0j, 0j)

    @classmethod
    def excited(cls) -> "AmplitudeState":
        return cls(0j, 1.0 + 0j)

    @property
    def norm_squared(self) -> float:
        return abs(self.c1) ** 2 + abs(self.c2) ** 2


@dataclass(frozen=True)
class BlochVector:
    u: float
    v: float
    w: float

    @classmethod
    def ground(cls) -> "BlochVector":
        return cls(0.0, 0.0, -1.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w])

    @property
    def length(self) -> float:
        return math.sqrt(self.u**2 + self.v**2 + self.w**2)

    @property
    def populations(self) -> tuple[float, float]:
        return 0.5 * (1.0 - self.w), 0.5 * (1.0 + self.w)


def bloch_from_amplitudes(c1, c2=None):
    """Bloch components (u, v, w) of the pure state (c1, c2); works elementwise on arrays.

    ``u + i v = 2 c1 conj(c2)``. This sign of v is the one for which the vector obeys the
    torque equation with Q = (Omega, 0, Delta) given the Hamiltonian above.
    """
    if isinstance(c1, AmplitudeState):
        c1, c2 = c1.c1, c1.c2
    coherence = 2.0 * np.multiply(c1, np.conj(c2))
    w = np.abs(c2) ** 2 - np.abs(c1) ** 2
    if np.ndim(coherence) == 0:
        return BlochVector(float(np.real(coherence)), float(np.imag(coherence)), float(w))
    return np.real(coherence), np.imag(coherence), w


def rwa_hamiltonian(omega: float, delta: float) -> np.ndarray:
    """Symmetrized RWA Hamiltonian in units of hbar/T."""
    return 0.5 * np.array([[-delta, omega], [omega, delta]], dtype=complex)


@dataclass
class Trajectory:
    """Sampled run: drive, adiabatic quantities, Bloch components and populations.

    ``c1``/``c2`` are only present for the amplitude picture.
    """

    t: np.ndarray
    omega: np.ndarray
    delta: np.ndarray
    eps_minus: np.ndarray
    eps_plus: np.ndarray
    theta: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    a0: np.ndarray
    c1: np.ndarray | None = None
    c2: np.ndarray | None = None

    @property
    def bloch(self) -> np.ndarray:
        return np.vstack([self.u, self.v, self.w])

    def norm_drift(self) -> float:
        """Largest deviation of |C|^2 (or |B|) from its initial value."""
        if self.c1 is not None:
            norm = np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2
        else:
            norm = np.sqrt(self.u**2 + self.v**2 + self.w**2)
        return float(np.max(np.abs(norm - norm[0])))

    def columns(self) -> np.ndarray:
        return np.column_stack([getattr(self, name) for name in TRAJECTORY_COLUMNS])

    def to_csv(self, path) -> Path:
        path = Path(path)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRAJECTORY_COLUMNS)
            for row in self.columns():
                writer.writerow([format(float(x), ".17g") for x in row])
        return path


def _derived_columns(profile: DriveProfile, t: np.ndarray, u, v, w):
    omega, delta = profile.sample(t)
    eps_minus, eps_plus = analysis.adiabatic_energies(omega, delta)
    try:
        theta = analysis.mixing_angle(omega, delta)
    except analysis.UndefinedAngleError:
        theta = np.full(t.shape, np.nan)
    a0 = analysis.dark_component((u, v, w), theta)
    return dict(omega=omega, delta=delta, eps_minus=eps_minus, eps_plus=eps_plus, theta=theta, a0=a0)


# The compiled driver's error norm divides by a sum of squared error terms. When every
# derivative component is ~1e-150 those squares are subnormal, the reciprocal overflows
# and the step size collapses. Components this small move the state by far less than
# any tolerance, so they are flushed to zero.
DERIVATIVE_FLOOR = 1e-100


def _flush(f: list[float]) -> list[float]:
    return [x if abs(x) >= DERIVATIVE_FLOOR else 0.0 for x in f]


_DOP853_CODES = {-1: "bad input", -2: "step budget exhausted", -3: "step size became too small", -4: "problem became stiff"}


def _integrate(rhs, y0, grid: TimeGrid):
    # the compiled DOP853 driver; stepping to each output time is cheaper than the
    # pure-Python stepper with dense output for these small systems
    ts = grid.times()
    out = np.empty((ts.size, len(y0)))
    out[0] = y0
    solver = ode(rhs).set_integrator("dop853", rtol=grid.rel_tol, atol=grid.abs_tol, nsteps=MAX_STEPS)
    solver.set_initial_value(np.asarray(y0, dtype=float), grid.t_start)
    for k in range(1, ts.size):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)  # failures are raised below instead
            y = solver.integrate(ts[k])
        if not solver.successful():
            code = solver.get_return_code()
            raise IntegrationError(_DOP853_CODES.get(code, f"return code {code}"), float(solver.t))
        if not np.all(np.isfinite(y)):
            raise IntegrationError("state became non-finite", float(solver.t))
        out[k] = y
    return ts, out.T


def propagate_amplitudes(
    profile: DriveProfile, grid: TimeGrid | None = None, initial: AmplitudeState | None = None
) -> Trajectory:
    """Integrate the Schroedinger equation for the probability amplitudes."""
    grid = grid or TimeGrid()
    initial = initial or AmplitudeState.ground()
    if abs(initial.norm_squared - 1.0) > 1e-12:
        raise ValueError(f"initial state not normalized: |C|^2 = {initial.norm_squared!r}")
    rabi, detuning = profile.rabi.scalar(), profile.detuning.scalar()

    def rhs(t, y):
        o = 0.5 * rabi(t)
        d = 0.5 * detuning(t)
        a, b, c, e = y.tolist()
        return _flush([o * e - d * b, d * a - o * c, o * b + d * e, -o * a - d * c])

    y0 = [initial.c1.real, initial.c1.imag, initial.c2.real, initial.c2.imag]
    t, y = _integrate(rhs, y0, grid)
    c1 = y[0] + 1j * y[1]
    c2 = y[2] + 1j * y[3]
    u, v, w = bloch_from_amplitudes(c1, c2)
    p1, p2 = np.abs(c1) ** 2, np.abs(c2) ** 2
    return Trajectory(t=t, u=u, v=v, w=w, p1=p1, p2=p2, c1=c1, c2=c2, **_derived_columns(profile, t, u, v, w))


def propagate_bloch(
    profile: DriveProfile, grid: TimeGrid | None = None, initial: BlochVector | None = None
) -> Trajectory:
    """Integrate the torque equation dB/dt = Q x B, Q = (Omega, 0, Delta)."""
    grid = grid or TimeGrid()
    initial = initial or BlochVector.ground()
    if abs(initial.length - 1.0) > 1e-12:
        raise ValueError(f"initial Bloch vector not of unit length: |B| = {initial.length!r}")
    rabi, detuning = profile.rabi.scalar(), profile.detuning.scalar()

    def rhs(t, y):
        o = rabi(t)
        d = detuning(t)
        u, v, w = y.tolist()
        return _flush([-d * v, d * u - o * w, o * v])

    t, y = _integrate(rhs, [initial.u, initial.v, initial.w], grid)
    u, v, w = y
    return Trajectory(
        t=t, u=u, v=v, w=w, p1=0.5 * (1.0 - w), p2=0.5 * (1.0 + w), **_derived_columns(profile, t, u, v, w)
    )


def picture_residual(amp: Trajectory, vec: Trajectory) -> float:
    """Componentwise max deviation between the two pictures' Bloch vectors."""
    return float(np.max(np.abs(amp.bloch - vec.bloch)))

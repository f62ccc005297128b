"""Adiabatic quantities derived from a drive profile or a trajectory.

The mixing angle is the direction of the torque vector (Omega, 0, Delta) in the
(u, w) plane, measured from +w towards +u. Because the torque passes through
zero and reverses whenever Omega and Delta vanish together, the angle is only
meaningful modulo pi; it is continued on the nearest pi-branch so the dark
component keeps its sign through such touching points.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .grid import TimeGrid
from .pulse_shapes import DriveProfile, SymmetryClass

# relative floor on the generalized Rabi frequency below which the angle is undefined
DEGENERACY_FLOOR = 1e-12


class UndefinedAngleError(ValueError):
    """Raised when the torque vanishes on every sample of the grid."""


def adiabatic_energies(omega, delta):
    """(eps_minus, eps_plus) = -/+ half the generalized Rabi frequency, in units of 1/T."""
    half = 0.5 * generalized_rabi(omega, delta)
    return -half, half


def generalized_rabi(omega, delta):
    return np.hypot(omega, delta)


def mixing_angle(omega, delta) -> np.ndarray:
    """Unwrapped mixing angle for sampled Omega and Delta arrays.

    Samples where the torque is degenerate take the value of the nearest valid sample
    (the earlier one on ties). The first valid sample lies in [0, pi).
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    rate = generalized_rabi(omega, delta)
    valid = rate >= DEGENERACY_FLOOR * rate.max() if rate.max() > 0 else np.zeros(rate.shape, bool)
    if not valid.any():
        raise UndefinedAngleError("torque vector vanishes everywhere; mixing angle undefined")

    idx = np.flatnonzero(valid)
    raw = np.mod(np.arctan2(omega[idx], delta[idx]), np.pi)
    raw[raw >= np.pi] = 0.0  # np.mod rounds tiny negatives up to pi
    # nearest-branch continuation modulo pi
    steps = np.diff(raw)
    steps -= np.pi * np.round(steps / np.pi)
    theta_valid = raw[0] + np.concatenate(([0.0], np.cumsum(steps)))

    # nearest valid neighbour for the degenerate samples
    pos = np.searchsorted(idx, np.arange(omega.size))
    left = np.clip(pos - 1, 0, idx.size - 1)
    right = np.clip(pos, 0, idx.size - 1)
    pick_right = np.abs(idx[right] - np.arange(omega.size)) < np.abs(np.arange(omega.size) - idx[left])
    nearest = np.where(pick_right, right, left)
    theta = theta_valid[nearest]
    theta[idx] = theta_valid
    return theta


@dataclass(frozen=True)
class MixingAngleSeries:
    t: np.ndarray
    theta: np.ndarray
    valid: np.ndarray

    @property
    def start(self) -> float:
        return float(self.theta[self.valid][0])

    @property
    def end(self) -> float:
        return float(self.theta[self.valid][-1])


def mixing_angle_series(profile: DriveProfile, grid: TimeGrid | None = None) -> MixingAngleSeries:
    grid = grid or TimeGrid()
    t = grid.times()
    omega, delta = profile.sample(t)
    rate = generalized_rabi(omega, delta)
    theta = mixing_angle(omega, delta)
    return MixingAngleSeries(t, theta, rate >= DEGENERACY_FLOOR * rate.max())


def dark_component(b, theta):
    """Projection ``u sin(theta) + w cos(theta)`` of the Bloch vector on the torque direction.

    ``b`` is a (u, v, w) triple or a (3, N) array; v never contributes.
    """
    u, _, w = b
    return u * np.sin(theta) + w * np.cos(theta)


def adiabaticity_metric(profile: DriveProfile, grid: TimeGrid | None = None) -> float:
    """max |d theta/dt| / generalized Rabi frequency over the non-degenerate samples.

    Much smaller than 1 means the torque turns slowly compared with the precession about it.
    """
    series = mixing_angle_series(profile, grid)
    omega, delta = profile.sample(series.t)
    rate = generalized_rabi(omega, delta)
    theta_dot = np.gradient(series.theta, series.t[1] - series.t[0])  # grid is uniform
    if not series.valid.any():
        raise UndefinedAngleError("no valid samples for the adiabaticity metric")
    return float(np.max(np.abs(theta_dot[series.valid]) / rate[series.valid]))


@dataclass(frozen=True)
class Outcome:
    """CPI, CPR or Partial, with the final excited-state population."""

    kind: str
    p2_final: float

    def __str__(self):
        return f"Partial({self.p2_final:.6g})" if self.kind == "Partial" else self.kind


def classify_outcome(traj, tol_outcome: float = 1e-2) -> Outcome:
    """Label the end of a ground-state run: CPI if P2 >= 1 - tol, CPR if P1 >= 1 - tol.

    ``traj`` is a trajectory (its last ``p1``/``p2`` record is used) or a bare final P2.
    """
    if hasattr(traj, "p2"):
        p1, p2 = float(traj.p1[-1]), float(traj.p2[-1])
    else:
        p2 = float(traj)
        p1 = 1.0 - p2
    if p2 >= 1.0 - tol_outcome:
        return Outcome("CPI", p2)
    if p1 >= 1.0 - tol_outcome:
        return Outcome("CPR", p2)
    return Outcome("Partial", p2)


class Prediction(enum.Enum):
    CPI = "CPI"
    CPR = "CPR"
    UNDETERMINED = "Undetermined"


_PARITY_TABLE = {
    (SymmetryClass.EVEN, SymmetryClass.ODD): Prediction.CPI,
    (SymmetryClass.ODD, SymmetryClass.EVEN): Prediction.CPI,
    (SymmetryClass.ODD, SymmetryClass.ODD): Prediction.CPR,
    (SymmetryClass.EVEN, SymmetryClass.EVEN): Prediction.CPR,
}


def predict_from_symmetry(rabi_sym: SymmetryClass, detuning_sym: SymmetryClass) -> Prediction:
    """Adiabatic-limit outcome from the time parities of Rabi frequency and detuning.

    Opposite parities invert the population, equal parities return it.
    """
    return _PARITY_TABLE.get((rabi_sym, detuning_sym), Prediction.UNDETERMINED)

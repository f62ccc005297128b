"""Scenario and sweep configuration, the four published presets, and the runners behind the CLI."""
from __future__ import annotations

import csv
import dataclasses
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from . import analysis
from .grid import TimeGrid
from .propagator import (
    AmplitudeState,
    IntegrationError,
    Trajectory,
    bloch_from_amplitudes,
    picture_residual,
    propagate_amplitudes,
    propagate_bloch,
)
from .pulse_shapes import (
    DriveProfile,
    Envelope,
    Gaussian,
    Negated,
    OddGaussian,
    Recombined,
    Scaled,
    SechPairEven,
    SechPairOdd,
    classify_symmetry,
    pulse_area,
)

log = logging.getLogger(__name__)

OUTPUT_KINDS = ("trajectory_csv", "bloch_plane_svg", "timeseries_svg", "summary_json")


class ConfigError(ValueError):
    pass


def _parse_initial(spec) -> AmplitudeState:
    if spec == "ground":
        return AmplitudeState.ground()
    if spec == "excited":
        return AmplitudeState.excited()
    if isinstance(spec, dict) and set(spec) == {"c1", "c2"}:
        c1, c2 = (complex(*map(float, spec[k])) for k in ("c1", "c2"))
        norm = abs(c1) ** 2 + abs(c2) ** 2
        if abs(norm - 1.0) > 1e-9:
            raise ConfigError(f"custom initial state not normalized: |c1|^2+|c2|^2 = {norm!r}")
        scale = 1.0 / math.sqrt(norm)
        return AmplitudeState(c1 * scale, c2 * scale)
    raise ConfigError(f"initial_state must be 'ground', 'excited' or {{'c1': [re, im], 'c2': [re, im]}}, got {spec!r}")


def _dump_initial(state: AmplitudeState):
    if state == AmplitudeState.ground():
        return "ground"
    if state == AmplitudeState.excited():
        return "excited"
    return {"c1": [state.c1.real, state.c1.imag], "c2": [state.c2.real, state.c2.imag]}


@dataclass(frozen=True)
class ScenarioConfig:
    profile: DriveProfile
    grid: TimeGrid = field(default_factory=TimeGrid)
    initial_state: AmplitudeState = field(default_factory=AmplitudeState.ground)
    outputs: tuple[str, ...] = ("summary_json",)
    tol_outcome: float = 1e-2
    symmetry_tol: float = 1e-9
    name: str = "scenario"

    def __post_init__(self):
        bad = set(self.outputs) - set(OUTPUT_KINDS)
        if bad:
            raise ConfigError(f"unknown outputs {sorted(bad)}; choose from {OUTPUT_KINDS}")
        if not 0.0 < self.tol_outcome < 0.5:
            raise ConfigError("tol_outcome must lie in (0, 0.5)")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "profile": self.profile.to_dict(),
            "grid": dataclasses.asdict(self.grid),
            "initial_state": _dump_initial(self.initial_state),
            "outputs": list(self.outputs),
            "tol_outcome": self.tol_outcome,
            "symmetry_tol": self.symmetry_tol,
        }

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> "ScenarioConfig":
        try:
            profile = DriveProfile.from_dict(data["profile"], base_dir)
            grid = TimeGrid(**data.get("grid", {}))
            return cls(
                profile=profile,
                grid=grid,
                initial_state=_parse_initial(data.get("initial_state", "ground")),
                outputs=tuple(data.get("outputs", ("summary_json",))),
                tol_outcome=float(data.get("tol_outcome", 1e-2)),
                symmetry_tol=float(data.get("symmetry_tol", 1e-9)),
                name=str(data.get("name", "scenario")),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid scenario config: {exc}") from exc

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(data, base_dir=path.parent)

    def with_grid(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, grid=dataclasses.replace(self.grid, **changes))


def _preset_profile(name: str) -> DriveProfile:
    if name == "fig1_left":  # chirped RAP: even Rabi, odd detuning
        return DriveProfile(Gaussian(30.0, 1.0), OddGaussian(-40.0, 1.5))
    if name == "fig1_right":  # both odd: exact return
        return DriveProfile(OddGaussian(-80.0, 1.0), SechPairOdd(-25.0, 3.0))
    if name == "fig2_left":  # odd Rabi, touching detuning: inversion without crossing
        return DriveProfile(OddGaussian(-40.0, 2.5), SechPairEven(4.0, 3.0))
    if name == "fig2_right":  # both even
        return DriveProfile(Gaussian(40.0, 2.5), SechPairEven(4.0, 3.0))
    raise KeyError(name)


PRESET_NAMES = ("fig1_left", "fig1_right", "fig2_left", "fig2_right")


def preset(name: str, grid: TimeGrid | None = None, outputs=OUTPUT_KINDS) -> ScenarioConfig:
    """One of the four published drive scenarios, on the [-10T, 10T] window by default."""
    try:
        profile = _preset_profile(name)
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {PRESET_NAMES}") from None
    return ScenarioConfig(profile=profile, grid=grid or TimeGrid(), outputs=tuple(outputs), name=name)


@dataclass
class ScenarioResult:
    name: str
    p1_final: float
    p2_final: float
    outcome: str
    predicted: str
    rabi_symmetry: str
    detuning_symmetry: str
    rabi_area: float
    detuning_area: float
    adiabaticity: float | None
    theta_start: float | None
    theta_end: float | None
    norm_drift_amplitudes: float
    norm_drift_bloch: float
    picture_residual: float
    trajectory: Trajectory | None = field(default=None, repr=False, compare=False)
    bloch_trajectory: Trajectory | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            if f.name in ("trajectory", "bloch_trajectory"):
                continue
            out[f.name] = getattr(self, f.name)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


def run_scenario(config: ScenarioConfig, out_dir=None) -> ScenarioResult:
    """Propagate both pictures, fill the diagnostics and write the requested files into ``out_dir``.

    Raises :class:`IntegrationError` if either integration fails and :class:`OSError` on write failure.
    """
    profile, grid = config.profile, config.grid
    amp = propagate_amplitudes(profile, grid, config.initial_state)
    vec = propagate_bloch(profile, grid, bloch_from_amplitudes(config.initial_state))

    half = max(abs(grid.t_start), abs(grid.t_end))
    sym_window = TimeGrid.symmetric(half, n_output=grid.n_output)
    rabi_sym = classify_symmetry(profile.rabi, sym_window, config.symmetry_tol)
    det_sym = classify_symmetry(profile.detuning, sym_window, config.symmetry_tol)
    try:
        adiabaticity = analysis.adiabaticity_metric(profile, grid)
        series = analysis.mixing_angle_series(profile, grid)
        theta_start, theta_end = series.start, series.end
    except analysis.UndefinedAngleError:
        adiabaticity = theta_start = theta_end = None

    result = ScenarioResult(
        name=config.name,
        p1_final=float(amp.p1[-1]),
        p2_final=float(amp.p2[-1]),
        outcome=str(analysis.classify_outcome(amp, config.tol_outcome)),
        predicted=analysis.predict_from_symmetry(rabi_sym, det_sym).value,
        rabi_symmetry=rabi_sym.value,
        detuning_symmetry=det_sym.value,
        rabi_area=pulse_area(profile.rabi, grid),
        detuning_area=pulse_area(profile.detuning, grid),
        adiabaticity=adiabaticity,
        theta_start=theta_start,
        theta_end=theta_end,
        norm_drift_amplitudes=amp.norm_drift(),
        norm_drift_bloch=vec.norm_drift(),
        picture_residual=picture_residual(amp, vec),
        trajectory=amp,
        bloch_trajectory=vec,
    )
    if out_dir is not None:
        write_outputs(config, result, out_dir)
    return result


def write_outputs(config: ScenarioConfig, result: ScenarioResult, out_dir) -> list[Path]:
    from . import svg

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    stem = out_dir / config.name
    if "trajectory_csv" in config.outputs:
        written.append(result.trajectory.to_csv(f"{stem}_trajectory.csv"))
    if "bloch_plane_svg" in config.outputs:
        written.append(svg.emit_bloch_plane(result.trajectory, f"{stem}_bloch_plane.svg", title=config.name))
    if "timeseries_svg" in config.outputs:
        written.append(svg.emit_timeseries(result.trajectory, f"{stem}_timeseries.svg", title=config.name))
    if "summary_json" in config.outputs:
        path = Path(f"{stem}_summary.json")
        path.write_text(result.to_json(), encoding="utf-8")
        written.append(path)
    return written


# ---------------------------------------------------------------- sweeps

SWEEP_AXES = ("rabi_scale", "detuning_scale", "delay", "time_scale")
SWEEP_METRICS = ("p2_final", "p1_final", "adiabaticity")


@dataclass(frozen=True)
class SweepAxis:
    """``rabi_scale``/``detuning_scale`` multiply one envelope, ``delay`` sets every delay parameter,
    ``time_scale`` stretches the pulses in time (equivalent to scaling both envelopes on a fixed window)."""

    name: str
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if self.name not in SWEEP_AXES:
            raise ConfigError(f"unknown sweep axis {self.name!r}; choose from {SWEEP_AXES}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ConfigError("sweep ranges must be finite")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ConfigError("each sweep axis needs steps >= 2")

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, int(self.steps))


@dataclass(frozen=True)
class SweepConfig:
    base: ScenarioConfig
    axes: tuple[SweepAxis, ...]
    metric: str = "p2_final"
    name: str = "sweep"

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ConfigError("a sweep takes one or two axes")
        if len({a.name for a in self.axes}) != len(self.axes):
            raise ConfigError("sweep axes must be distinct")
        if self.metric not in SWEEP_METRICS:
            raise ConfigError(f"unknown metric {self.metric!r}; choose from {SWEEP_METRICS}")

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> "SweepConfig":
        try:
            base = data["base"]
            if isinstance(base, str):
                base_cfg = preset(base, outputs=("summary_json",))
            else:
                base_cfg = ScenarioConfig.from_dict(base, base_dir)
            axes = tuple(
                SweepAxis(a["name"], float(a["min"]), float(a["max"]), int(a["steps"])) for a in data["axes"]
            )
            return cls(base_cfg, axes, data.get("metric", "p2_final"), str(data.get("name", "sweep")))
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid sweep config: {exc}") from exc

    @classmethod
    def load(cls, path) -> "SweepConfig":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(data, base_dir=path.parent)


def _with_delay(env: Envelope, delay: float) -> tuple[Envelope, bool]:
    if isinstance(env, (Scaled, Negated)):
        inner, hit = _with_delay(env.inner, delay)
        return dataclasses.replace(env, inner=inner), hit
    if isinstance(env, Recombined):
        base, _ = _with_delay(env.base, delay)
        return dataclasses.replace(env, base=base, delay=delay), True
    if hasattr(env, "delay"):
        return dataclasses.replace(env, delay=delay), True
    return env, False


def apply_axis(profile: DriveProfile, axis: str, value: float) -> DriveProfile:
    if axis == "rabi_scale":
        return profile.scaled(rabi_factor=value)
    if axis == "detuning_scale":
        return profile.scaled(detuning_factor=value)
    if axis == "time_scale":
        # i dC/dt = H(t/s) C is i dC/dt' = s H(t') C in t' = t/s
        return profile.scaled(value, value)
    if axis == "delay":
        rabi, hit_r = _with_delay(profile.rabi, value)
        det, hit_d = _with_delay(profile.detuning, value)
        if not (hit_r or hit_d):
            raise ConfigError("profile has no delay parameter to sweep")
        return DriveProfile(rabi, det, profile.time_unit_T)
    raise ConfigError(f"unknown sweep axis {axis!r}")


@dataclass(frozen=True)
class SweepRow:
    values: tuple[float, ...]
    metric: float
    error: str | None = None


def _run_cell(base: ScenarioConfig, axes: tuple[str, ...], values: tuple[float, ...], metric: str) -> SweepRow:
    try:
        profile = base.profile
        for axis, value in zip(axes, values):
            profile = apply_axis(profile, axis, value)
        result = run_scenario(dataclasses.replace(base, profile=profile))
        value = getattr(result, metric)
        return SweepRow(values, float("nan") if value is None else float(value))
    except (IntegrationError, ConfigError, ValueError, ArithmeticError) as exc:
        log.warning("sweep cell %s failed: %s", values, exc)
        return SweepRow(values, float("nan"), f"{type(exc).__name__}: {exc}")


def run_sweep(config: SweepConfig, out_dir=None, workers: int = 1) -> list[SweepRow]:
    """Evaluate the scenario on the full axis grid, rows in row-major axis order.

    Failed cells carry NaN and the error text; the sweep carries on.
    """
    names = tuple(a.name for a in config.axes)
    cells = [tuple(float(x) for x in combo) for combo in product(*(a.values() for a in config.axes))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell, *zip(*[(config.base, names, c, config.metric) for c in cells])))
    else:
        rows = [_run_cell(config.base, names, c, config.metric) for c in cells]
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_sweep_csv(rows, names, config.metric, out_dir / f"{config.name}.csv")
    return rows


def write_sweep_csv(rows: list[SweepRow], names, metric: str, path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([*names, metric, "error"])
        for row in rows:
            writer.writerow([*(format(v, ".17g") for v in row.values), format(row.metric, ".17g"), row.error or ""])
    return path

"""Command-line entry point.

    adiabatic-passage run config.json
    adiabatic-passage preset fig2_left --out-dir out/
    adiabatic-passage sweep sweep.json --jobs 4
    adiabatic-passage spectrum config.json

Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .grid import TimeGrid
from .propagator import IntegrationError, propagate_amplitudes
from .pulse_shapes import pulse_area
from .scenario import (
    PRESET_NAMES,
    ConfigError,
    ScenarioConfig,
    SweepConfig,
    preset,
    run_scenario,
    run_sweep,
)
from .spectral import area_from_spectrum, spectrum

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("adiabatic_passage")


def _window(text: str) -> tuple[float, float]:
    parts = [p for p in text.replace(":", ",").split(",") if p.strip()]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window {text!r}") from None
    if len(values) == 1:
        return -abs(values[0]), abs(values[0])
    if len(values) == 2:
        return values[0], values[1]
    raise argparse.ArgumentTypeError("window is HALF_WIDTH or START,END")


def _grid_overrides(args) -> dict:
    changes = {}
    if args.window is not None:
        changes["t_start"], changes["t_end"] = args.window
    if args.samples is not None:
        changes["n_output"] = args.samples
    if args.rel_tol is not None:
        changes["rel_tol"] = args.rel_tol
    return changes


def _apply(config: ScenarioConfig, args) -> ScenarioConfig:
    changes = _grid_overrides(args)
    if not changes:
        return config
    try:
        return config.with_grid(**changes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def window_sensitivity(config: ScenarioConfig, half_width: float) -> dict:
    """Rerun on [-half_width, half_width] (which must contain the configured window) and report the P2 change."""
    grid = config.grid
    if half_width < max(abs(grid.t_start), abs(grid.t_end)):
        raise ConfigError(f"--window-check {half_width:g} does not contain the window [{grid.t_start:g}, {grid.t_end:g}]")
    # both runs on a 3-point output grid, since output stops shift the adaptive steps slightly
    base = propagate_amplitudes(config.profile, config.with_grid(n_output=3).grid, config.initial_state).p2[-1]
    wide = config.with_grid(t_start=-half_width, t_end=half_width, n_output=3).grid
    p2 = propagate_amplitudes(config.profile, wide, config.initial_state).p2[-1]
    return {"half_width": half_width, "p2_final": float(p2), "delta_p2": float(p2 - base)}


def _report(config: ScenarioConfig, args) -> int:
    result = run_scenario(config, args.out_dir)
    out = result.to_dict()
    if args.window_check is not None:
        out["window_check"] = window_sensitivity(config, args.window_check)
        if abs(out["window_check"]["delta_p2"]) > config.tol_outcome:
            log.warning("final P2 moves by %.3g on the wider window", out["window_check"]["delta_p2"])
    print(json.dumps(out, indent=2, sort_keys=True, allow_nan=False))
    return EXIT_OK


def cmd_run(args) -> int:
    return _report(_apply(ScenarioConfig.load(args.config), args), args)


def cmd_preset(args) -> int:
    return _report(_apply(preset(args.name), args), args)


def cmd_sweep(args) -> int:
    sweep = SweepConfig.load(args.config)
    changes = _grid_overrides(args)
    if changes:
        sweep = SweepConfig(_apply(sweep.base, args), sweep.axes, sweep.metric, sweep.name)
    rows = run_sweep(sweep, args.out_dir, workers=args.jobs)
    names = [a.name for a in sweep.axes]
    print("\t".join([*names, sweep.metric]))
    for row in rows:
        print("\t".join([*(f"{v:.6g}" for v in row.values), row.error or f"{row.metric:.10g}"]))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    path = Path(args.config)
    config = _apply(ScenarioConfig.load(path), args)
    with open(path, encoding="utf-8") as fh:
        extra = json.load(fh).get("spectrum", {})
    which = extra.get("envelope", "rabi")
    if which not in ("rabi", "detuning"):
        raise ConfigError("spectrum.envelope must be 'rabi' or 'detuning'")
    env = getattr(config.profile, which)
    half = float(extra.get("max_detuning", 20.0))
    steps = int(extra.get("steps", 401))
    if steps < 3 or steps % 2 == 0 or half <= 0:
        raise ConfigError("spectrum needs an odd steps >= 3 and max_detuning > 0 (the grid must contain 0)")
    detunings = np.linspace(-half, half, steps)
    detunings[steps // 2] = 0.0
    spec = spectrum(env, detunings, config.grid)
    area = pulse_area(env, config.grid)
    out_dir = Path(args.out_dir or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = spec.to_csv(out_dir / f"{config.name}_{which}_spectrum.csv")
    print(json.dumps({
        "envelope": which,
        "pulse_area": area,
        "area_from_spectrum": area_from_spectrum(spec),
        "csv": str(csv_path),
    }, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adiabatic-passage", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", type=Path, default=None, help="directory for CSV/SVG/JSON outputs")
    common.add_argument("--rel-tol", type=float, default=None, help="integrator relative tolerance")
    common.add_argument("--window", type=_window, default=None, help="HALF_WIDTH or START,END in units of T")
    common.add_argument("--samples", type=int, default=None, help="number of output samples")
    common.add_argument("--window-check", type=float, default=None, metavar="HALF",
                        help="also rerun on [-HALF, HALF] and report the change in final P2")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run a scenario from a JSON config")
    p.add_argument("config", type=Path)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("preset", parents=[common], help="run one of the published scenarios")
    p.add_argument("name", choices=PRESET_NAMES)
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("sweep", parents=[common], help="parameter sweep from a JSON config")
    p.add_argument("config", type=Path)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spectrum", parents=[common], help="Fourier spectrum of a scenario's envelope")
    p.add_argument("config", type=Path)
    p.set_defaults(func=cmd_spectrum)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_CONFIG
    except (IntegrationError, FloatingPointError, ArithmeticError) as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

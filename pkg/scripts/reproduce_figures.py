"""Run the four published scenarios and write trajectory CSVs, SVG charts and summaries.

    python scripts/reproduce_figures.py --out-dir out/figures
"""
import argparse
from pathlib import Path

from adiabatic_passage.scenario import PRESET_NAMES, preset, run_scenario


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", type=Path, default=Path("out/figures"))
    args = parser.parse_args()
    print(f"{'preset':<12}{'outcome':>9}{'predicted':>11}{'P2 final':>14}{'adiabaticity':>14}{'residual':>11}")
    for name in PRESET_NAMES:
        r = run_scenario(preset(name), args.out_dir)
        print(f"{name:<12}{r.outcome:>9}{r.predicted:>11}{r.p2_final:>14.8f}{r.adiabaticity:>14.4f}"
              f"{r.picture_residual:>11.1e}")
    print(f"files in {args.out_dir}")


if __name__ == "__main__":
    main()

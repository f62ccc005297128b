"""Two-state coherent excitation by shaped pulses: adiabatic passage with and without level crossing."""
from .analysis import (
    Outcome,
    Prediction,
    UndefinedAngleError,
    adiabatic_energies,
    adiabaticity_metric,
    classify_outcome,
    dark_component,
    generalized_rabi,
    mixing_angle,
    mixing_angle_series,
    predict_from_symmetry,
)
from .grid import TimeGrid
from .propagator import (
    AmplitudeState,
    BlochVector,
    IntegrationError,
    Trajectory,
    bloch_from_amplitudes,
    propagate_amplitudes,
    propagate_bloch,
    rwa_hamiltonian,
)
from .pulse_shapes import (
    Constant,
    DriveProfile,
    Envelope,
    Gaussian,
    Negated,
    OddGaussian,
    Recombined,
    Scaled,
    SechPairEven,
    SechPairOdd,
    SymmetryClass,
    Tabulated,
    Zero,
    classify_symmetry,
    evaluate,
    pulse_area,
)
from .scenario import PRESET_NAMES, ScenarioConfig, ScenarioResult, SweepAxis, SweepConfig, preset, run_scenario, run_sweep
from .spectral import Spectrum, area_from_spectrum, spectrum

__version__ = "0.1.0"

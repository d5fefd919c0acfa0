"""Time-dependent Schrodinger propagation, noise Monte Carlo, and tuning."""

from shuttlesim.dynamics.model import HamiltonianModel, NoiseChannel, psd_from_amplitude_per_sqrt_hz
from shuttlesim.dynamics.pulse import Pulse
from shuttlesim.dynamics.propagator import StepSizeError, build_time_grid, propagate
from shuttlesim.dynamics.fidelity import (
    FidelityReport,
    process_fidelity_with_leakage,
    state_fidelity,
)
from shuttlesim.dynamics.montecarlo import monte_carlo_fidelity
from shuttlesim.dynamics.tuning import TuningResult, optimize_pulse

__all__ = [
    "FidelityReport",
    "HamiltonianModel",
    "NoiseChannel",
    "Pulse",
    "StepSizeError",
    "TuningResult",
    "build_time_grid",
    "monte_carlo_fidelity",
    "optimize_pulse",
    "process_fidelity_with_leakage",
    "propagate",
    "psd_from_amplitude_per_sqrt_hz",
    "state_fidelity",
]

"""Desk-scale simulation suite for a shuttling-based spin-qubit architecture.

Subpackages:

- ``core``        constants, unit conversions, deterministic random streams
- ``potentials``  gate layouts, traveling-wave potentials, dot tracking,
                  orbital splitting
- ``magnetics``   analytic stray fields of cuboid micromagnets
- ``dynamics``    Schrodinger propagation, noise Monte Carlo, fidelity
                  metrics, derivative-free pulse tuning
- ``ops``         quantum operation models: PSB init/readout, shuttling
                  EDSR, exchange CZ, valley statistics, CNOT synthesis
- ``exchange``    two-electron 1D solver producing J(d)
- ``arch``        unit-cell grid, stabilizer-cycle scheduling, wiring budget
- ``experiments`` config-driven experiment runners behind the CLI
"""

from shuttlesim.core import (
    DEFAULT_UNITS,
    SeedSpec,
    UnitSystem,
    derive_stream,
    energy_to_field,
    field_to_energy,
)

__all__ = [
    "DEFAULT_UNITS",
    "SeedSpec",
    "UnitSystem",
    "derive_stream",
    "energy_to_field",
    "field_to_energy",
]

__version__ = "0.1.0"

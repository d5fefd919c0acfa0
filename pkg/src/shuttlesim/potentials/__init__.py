"""Electrostatic gate layouts, traveling-wave potentials, and dot tracking."""

from shuttlesim.potentials.layout import (
    DeviceLayout,
    GateSpec,
    LaneAxis,
    ir_zone_layout,
    manipulation_zone_layout,
    straight_lane_layout,
    t_junction_layout,
)
from shuttlesim.potentials.basis import (
    BasisPotential,
    GridSpec,
    PotentialField,
    compose_potential,
    compose_window,
    gate_basis_potential,
    gate_potential_at,
    layout_basis_potentials,
)
from shuttlesim.potentials.waveform import (
    PhaseTrajectory,
    WaveformProgram,
    corner_shuttle_program,
    approach_program,
    straight_shuttle_program,
    shuttle_voltages,
)
from shuttlesim.potentials.tracking import (
    DotTrajectory,
    TrackingLostError,
    track_dot_minimum,
    track_program,
)
from shuttlesim.potentials.orbital import OrbitalSplitting, orbital_splitting

__all__ = [
    "BasisPotential",
    "DeviceLayout",
    "DotTrajectory",
    "GateSpec",
    "GridSpec",
    "LaneAxis",
    "OrbitalSplitting",
    "PhaseTrajectory",
    "PotentialField",
    "TrackingLostError",
    "WaveformProgram",
    "approach_program",
    "compose_potential",
    "compose_window",
    "corner_shuttle_program",
    "gate_basis_potential",
    "gate_potential_at",
    "ir_zone_layout",
    "layout_basis_potentials",
    "manipulation_zone_layout",
    "orbital_splitting",
    "shuttle_voltages",
    "straight_lane_layout",
    "straight_shuttle_program",
    "t_junction_layout",
    "track_dot_minimum",
    "track_program",
]

"""Physical constants, unit conversions, and deterministic random streams.

The package works in a single fixed unit system throughout:
energy in ueV, time in ns, length in nm, magnetic field in mT.
Handy consequences: frequencies come out in GHz (1/ns) and
``h * f_GHz`` is an energy in ueV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# CODATA 2018, expressed in the package base units.
HBAR_UEV_NS = 6.582119569e-1  # hbar, ueV ns
H_UEV_NS = 2.0 * math.pi * HBAR_UEV_NS
BOHR_MAGNETON_UEV_PER_T = 57.88381806  # mu_B, ueV/T
BOHR_MAGNETON_UEV_PER_MT = BOHR_MAGNETON_UEV_PER_T * 1e-3
SPEED_OF_LIGHT_NM_PER_NS = 2.99792458e8
ELECTRON_MASS_UEV_NS2_PER_NM2 = 0.51099895e12 / SPEED_OF_LIGHT_NM_PER_NS**2
COULOMB_UEV_NM = 1.43996454e6  # e^2 / (4 pi eps_0), ueV nm

# Si conduction-band defaults; both are configuration, not constants.
SI_EFFECTIVE_MASS = 0.19  # transverse effective mass, units of m_e
SI_RELATIVE_PERMITTIVITY = 11.7


@dataclass(frozen=True)
class UnitSystem:
    """Fixed ueV/ns/nm/mT unit system with a configurable g-factor."""

    g_factor: float = 2.0
    bohr_magneton_uev_per_t: float = BOHR_MAGNETON_UEV_PER_T
    hbar_uev_ns: float = HBAR_UEV_NS
    h_uev_ns: float = H_UEV_NS

    energy_unit = "ueV"
    time_unit = "ns"
    length_unit = "nm"
    field_unit = "mT"

    def __post_init__(self):
        if self.g_factor <= 0:
            raise ValueError(f"g_factor must be positive, got {self.g_factor}")
        rel = abs(self.h_uev_ns - 2.0 * math.pi * self.hbar_uev_ns) / self.h_uev_ns
        if rel > 1e-12:
            raise ValueError("h and hbar are inconsistent (h != 2*pi*hbar)")


DEFAULT_UNITS = UnitSystem()


def field_to_energy(b_mt: float, units: UnitSystem = DEFAULT_UNITS) -> float:
    """Zeeman energy g * mu_B * B in ueV for a field given in mT."""
    return units.g_factor * units.bohr_magneton_uev_per_t * 1e-3 * b_mt


def energy_to_field(e_uev: float, units: UnitSystem = DEFAULT_UNITS) -> float:
    """Inverse of :func:`field_to_energy`."""
    return e_uev / (units.g_factor * units.bohr_magneton_uev_per_t * 1e-3)


def larmor_frequency_ghz(b_mt: float, units: UnitSystem = DEFAULT_UNITS) -> float:
    """Spin precession frequency g * mu_B * B / h in GHz."""
    return field_to_energy(b_mt, units) / units.h_uev_ns


_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    # Bijective 64-bit mix (splitmix64 finalizer).
    x = (x + _GOLDEN) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class SeedSpec:
    """Addressable random stream: (master_seed, stream_id) -> Philox key.

    The generator is counter-based, so shots derived from one parent can be
    evaluated in any order and still reproduce bit-identical draws.
    """

    master_seed: int
    stream_id: int = 0

    def rng(self) -> np.random.Generator:
        key = ((self.master_seed & _MASK64) << 64) | (self.stream_id & _MASK64)
        return np.random.Generator(np.random.Philox(key=key))


def derive_stream(seed: SeedSpec, shot_index: int) -> SeedSpec:
    """Child stream for one shot; injective in shot_index for a fixed parent.

    The map shot_index -> child stream_id composes an odd-constant affine
    step (a bijection mod 2^64) with the splitmix64 finalizer (also a
    bijection), so distinct shot indices below 2^64 always get distinct
    stream ids.
    """
    if shot_index < 0:
        raise ValueError(f"shot_index must be >= 0, got {shot_index}")
    mixed = (seed.stream_id + _GOLDEN * (shot_index + 1)) & _MASK64
    return SeedSpec(seed.master_seed, _splitmix64(mixed))

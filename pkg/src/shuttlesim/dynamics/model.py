"""Hamiltonian models with noise entering through derivative operators.

A model is affine in its noise parameters:

    H(t, n) = base(t) + sum_c n_c * coupling_c(t)

i.e. parameter noise is inserted to first order via the analytic derivative
of the Hamiltonian with respect to the noisy parameter. This keeps the
white-noise discretization consistent as the step size changes and matches
the analytic dephasing formulas used as oracles in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

#: one-sided PSD unit used internally: (parameter units)^2 / GHz, i.e.
#: (parameter units)^2 * ns.
PSD_UNIT_NOTE = "parameter-units^2 per GHz (time base ns)"


def psd_from_amplitude_per_sqrt_hz(amplitude_per_sqrt_hz: float) -> float:
    """Convert a noise amplitude given per sqrt(Hz) into the internal PSD unit.

    S = amplitude^2 carries units of parameter-units^2/Hz; multiplying by
    1e9 expresses it per GHz (equivalently parameter-units^2 * ns).
    """
    return amplitude_per_sqrt_hz**2 * 1e9


@dataclass(frozen=True)
class NoiseChannel:
    """Noise on one model parameter.

    ``quasistatic``: offset drawn once per shot from N(0, sigma).
    ``white``: independent per-step values from N(0, sqrt(psd / (2 dt))),
    with one-sided PSD ``psd`` in parameter-units^2/GHz.
    """

    kind: str
    target: str
    sigma: float = 0.0
    psd: float = 0.0

    def __post_init__(self):
        if self.kind not in ("quasistatic", "white"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.sigma < 0 or self.psd < 0:
            raise ValueError("sigma and psd must be non-negative")

    def sample_trace(self, dt_ns: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Per-step parameter values for one shot on a given step grid."""
        n = len(dt_ns)
        if self.kind == "quasistatic":
            return np.full(n, rng.normal(0.0, self.sigma))
        return rng.normal(0.0, 1.0, size=n) * np.sqrt(self.psd / (2.0 * dt_ns))


@dataclass(frozen=True)
class HamiltonianModel:
    """Time-dependent Hermitian generator with affine noise couplings.

    ``base`` maps an array of times (k,) to a stack of Hermitian matrices
    (k, dim, dim) in ueV. ``couplings`` holds, per noise target, the
    derivative operator dH/d(parameter) with the same calling convention.
    """

    dim: int
    base: Callable[[np.ndarray], np.ndarray]
    couplings: Mapping[str, Callable[[np.ndarray], np.ndarray]] = field(default_factory=dict)
    noise_channels: tuple[NoiseChannel, ...] = ()

    def __post_init__(self):
        for ch in self.noise_channels:
            if ch.target not in self.couplings:
                raise ValueError(f"noise channel targets unknown parameter {ch.target!r}")

    def hamiltonian(self, t: float, noise: Mapping[str, float] | None = None) -> np.ndarray:
        """Single-time H(t, noise) in ueV."""
        h = self.base(np.atleast_1d(float(t)))[0].copy()
        for name, value in (noise or {}).items():
            h += value * self.couplings[name](np.atleast_1d(float(t)))[0]
        return h


def hermiticity_defect(h: np.ndarray) -> float:
    """Relative deviation from Hermiticity, for validation tests."""
    scale = np.linalg.norm(h)
    if scale == 0:
        return 0.0
    return np.linalg.norm(h - h.conj().T) / scale


def constant_model(h: np.ndarray, couplings: Mapping[str, np.ndarray] | None = None,
                   noise_channels=()) -> HamiltonianModel:
    """Model with a time-independent Hamiltonian (and constant couplings)."""
    h = np.asarray(h, dtype=complex)

    def shape_const(matrix):
        return lambda t: np.broadcast_to(matrix, (len(np.atleast_1d(t)),) + matrix.shape)

    coup = {k: shape_const(np.asarray(v, dtype=complex)) for k, v in (couplings or {}).items()}
    return HamiltonianModel(dim=h.shape[0], base=shape_const(h), couplings=coup,
                            noise_channels=tuple(noise_channels))

"""Piecewise-constant control pulses on a uniform time grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Pulse:
    """Control values with piecewise-constant semantics on [k*dt, (k+1)*dt).

    ``values[k]`` is the parameter value held during step k.
    """

    dt_ns: float
    values: np.ndarray

    def __post_init__(self):
        if self.dt_ns <= 0:
            raise ValueError(f"dt_ns must be positive, got {self.dt_ns}")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("values must be a non-empty 1D array")

    @property
    def duration_ns(self) -> float:
        return self.dt_ns * self.values.size

    def value_at(self, t):
        """Value at time t (scalar or array); the final step extends to t = duration."""
        idx = np.clip((np.asarray(t) / self.dt_ns).astype(int), 0, self.values.size - 1)
        return self.values[idx]

    def reversed(self) -> "Pulse":
        return Pulse(self.dt_ns, self.values[::-1].copy())


def linear_pulse(start: float, stop: float, duration_ns: float, n_steps: int) -> Pulse:
    """Linear ramp sampled at step midpoints."""
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    dt = duration_ns / n_steps
    mid = (np.arange(n_steps) + 0.5) * dt
    return Pulse(dt, start + (stop - start) * mid / duration_ns)

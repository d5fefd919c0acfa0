"""Time-ordered propagation of small Hilbert-space Hamiltonians.

The propagator is the step product U = prod_k exp(-i H_k dt_k / hbar) with
H_k sampled at step midpoints. Steps are chosen so the global-phase-
invariant rotation per step, dt * (lambda_max - lambda_min) / (2 hbar),
stays below ``max_phase`` (default 0.2 rad).

Two evaluation paths share the same grid and sampling:

- :func:`propagate` builds the exact unitary via eigendecomposition per
  step (used for noiseless references and invariants);
- :func:`propagate_columns_batch` carries a batch of state columns through
  a converged Taylor expansion of each step (used by the Monte Carlo loop,
  where thousands of noisy shots run in lock-step).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from shuttlesim.core import HBAR_UEV_NS


class StepSizeError(ValueError):
    """Raised when an explicit step size violates the rotation-per-step guard."""


@dataclass(frozen=True)
class TimeGrid:
    """Midpoint-sampled integration grid with per-step durations."""

    t_mid: np.ndarray
    dt: np.ndarray

    @property
    def n_steps(self) -> int:
        return len(self.dt)

    @property
    def duration(self) -> float:
        return float(np.sum(self.dt))


def _half_spread(h: np.ndarray) -> float:
    ev = np.linalg.eigvalsh(h)
    return 0.5 * float(ev[-1] - ev[0])


def build_time_grid(model, duration: float, *, dt: float | None = None,
                    max_phase: float = 0.2, dt_max: float = 1.0,
                    allow_large_steps: bool = False,
                    hbar: float = HBAR_UEV_NS) -> TimeGrid:
    """Integration grid for ``model`` over ``duration`` ns.

    With ``dt`` given, a uniform grid is built and validated against the
    rotation guard (StepSizeError unless ``allow_large_steps``). Otherwise
    steps adapt to the local spectral spread of the deterministic part,
    plus a 3-sigma margin for quasistatic channels and a white-noise
    rotation bound that shrinks dt where the coupling is strong.
    """
    if duration < 0:
        raise ValueError("duration must be non-negative")
    if duration == 0:
        return TimeGrid(t_mid=np.empty(0), dt=np.empty(0))

    if dt is not None:
        n = max(1, int(np.ceil(duration / dt - 1e-9)))
        edges = np.linspace(0.0, duration, n + 1)
        dts = np.diff(edges)
        mids = edges[:-1] + dts / 2
        if not allow_large_steps:
            for t, step in zip(mids, dts):
                if step * _half_spread(model.base(np.array([t]))[0]) / hbar > max_phase:
                    raise StepSizeError(
                        f"dt = {step:g} ns exceeds the {max_phase} rad rotation guard "
                        f"near t = {t:g} ns; pass allow_large_steps=True to override")
        return TimeGrid(t_mid=mids, dt=dts)

    quasi = [ch for ch in model.noise_channels if ch.kind == "quasistatic" and ch.sigma > 0]
    white = [ch for ch in model.noise_channels if ch.kind == "white" and ch.psd > 0]

    def radius_at(t):
        r = _half_spread(model.base(np.array([t]))[0])
        for ch in quasi:
            r += 3.0 * ch.sigma * _half_spread(model.couplings[ch.target](np.array([t]))[0])
        return r

    def step_at(t, radius):
        step = min(dt_max, guard / max(radius, 1e-30))
        for ch in white:
            # rotation from a white step ~ |D| sqrt(S dt / 2) / hbar
            d_norm = _half_spread(model.couplings[ch.target](np.array([t]))[0])
            if d_norm > 0:
                step = min(step, 2.0 * guard**2 / (d_norm**2 * ch.psd))
        return step

    t_mids, dts = [], []
    t = 0.0
    guard = max_phase * hbar
    while t < duration - 1e-12:
        step = step_at(t, radius_at(t))
        # refine against mid-step growth of the generator
        for _ in range(3):
            refined = step_at(t, max(radius_at(t), radius_at(min(t + step / 2, duration))))
            if refined > 0.9 * step:
                step = min(step, refined)
                break
            step = refined
        step = min(step, duration - t)
        t_mids.append(t + step / 2)
        dts.append(step)
        t += step
    return TimeGrid(t_mid=np.asarray(t_mids), dt=np.asarray(dts))


def _assemble_hamiltonians(model, grid: TimeGrid,
                           noise_traces: Mapping[str, np.ndarray] | None) -> np.ndarray:
    h = np.asarray(model.base(grid.t_mid), dtype=complex)
    if noise_traces:
        for name, trace in noise_traces.items():
            h = h + np.asarray(trace)[:, None, None] * model.couplings[name](grid.t_mid)
    return h


def propagate(model, duration: float | None = None, *, grid: TimeGrid | None = None,
              noise_traces: Mapping[str, np.ndarray] | None = None,
              dt: float | None = None, max_phase: float = 0.2,
              allow_large_steps: bool = False, hbar: float = HBAR_UEV_NS,
              unitarity_tol: float = 1e-10) -> np.ndarray:
    """Exact time-ordered propagator over ``duration`` (or an explicit grid).

    ``noise_traces`` maps noise targets to per-step parameter values on the
    same grid. Each step is exponentiated by eigendecomposition, so the
    result is unitary to machine precision; a final check enforces
    ``unitarity_tol``.
    """
    if grid is None:
        grid = build_time_grid(model, duration, dt=dt, max_phase=max_phase,
                               allow_large_steps=allow_large_steps, hbar=hbar)
    hams = _assemble_hamiltonians(model, grid, noise_traces)
    u = np.eye(model.dim, dtype=complex)
    for k in range(grid.n_steps):
        evals, evecs = np.linalg.eigh(hams[k])
        phase = np.exp(-1j * evals * grid.dt[k] / hbar)
        u = (evecs * phase) @ evecs.conj().T @ u
    defect = np.linalg.norm(u.conj().T @ u - np.eye(model.dim))
    if defect > unitarity_tol:
        raise RuntimeError(f"propagator unitarity defect {defect:.2e} exceeds {unitarity_tol}")
    return u


def _taylor_order(theta: float, tol: float = 1e-13) -> int:
    # Smallest m with theta^(m+1)/(m+1)! < tol.
    term = 1.0
    for m in range(1, 40):
        term *= theta / m
        if term < tol:
            return m
    return 40


def apply_step_batch(h_batch: np.ndarray, columns: np.ndarray, dt: float,
                     hbar: float = HBAR_UEV_NS) -> np.ndarray:
    """Apply exp(-i H dt / hbar) to state columns, batched over shots.

    ``h_batch`` is (n, d, d), ``columns`` (n, d, m). The Taylor series is
    carried to convergence below 1e-13 of the step norm, so unitarity of
    the applied map is preserved to the same level.
    """
    a = h_batch * (dt / hbar)
    theta = float(np.sqrt(np.max(np.einsum("nij,nij->n", np.abs(a), np.abs(a)).real)))
    order = _taylor_order(max(theta, 1e-6))
    out = columns.copy()
    term = columns
    for m in range(1, order + 1):
        term = np.einsum("nij,njk->nik", a, term) * (-1j / m)
        out = out + term
    return out


def propagate_columns_batch(model, grid: TimeGrid, columns0: np.ndarray,
                            noise_traces_batch: Mapping[str, np.ndarray] | None,
                            hbar: float = HBAR_UEV_NS) -> np.ndarray:
    """Carry (n_shots, d, m) state columns through the full grid.

    ``noise_traces_batch`` maps each noise target to an (n_shots, n_steps)
    array of parameter values.
    """
    bases = np.asarray(model.base(grid.t_mid), dtype=complex)
    coups = {}
    if noise_traces_batch:
        for name in noise_traces_batch:
            coups[name] = np.asarray(model.couplings[name](grid.t_mid), dtype=complex)
    cols = np.array(columns0, dtype=complex)
    for k in range(grid.n_steps):
        hk = np.broadcast_to(bases[k], cols.shape[:1] + bases[k].shape)
        if coups:
            hk = hk.copy()
            for name, traces in noise_traces_batch.items():
                hk += traces[:, k, None, None] * coups[name][k]
        cols = apply_step_batch(hk, cols, grid.dt[k], hbar)
    return cols

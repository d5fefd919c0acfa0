"""Derivative-free local tuning of pulse parameters (Nelder-Mead)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize


@dataclass(frozen=True)
class TuningResult:
    params: np.ndarray
    value: float
    evaluations: int
    improved: bool
    trace: np.ndarray = field(repr=False, default=None)


def optimize_pulse(objective, x0, *, bounds=None, budget: int = 500,
                   xatol: float = 1e-6, fatol: float = 1e-10) -> TuningResult:
    """Minimize a deterministic objective with bound-clipped Nelder-Mead.

    Returns the best parameters seen (not just the simplex centroid) and a
    monotone best-so-far trace. If no evaluation improves on the starting
    point, the start is returned with ``improved=False``.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if bounds is not None:
        lo = np.asarray([b[0] for b in bounds], dtype=float)
        hi = np.asarray([b[1] for b in bounds], dtype=float)
        if np.any(lo > hi):
            raise ValueError("invalid bounds")
    trace: list[float] = []
    best = {"x": x0.copy(), "f": np.inf}
    count = {"n": 0}

    def wrapped(x):
        if count["n"] >= budget:
            # Nelder-Mead's own maxfev also stops it; this guard keeps the
            # count exact when scipy overshoots by a simplex.
            return best["f"] + 1.0
        count["n"] += 1
        xc = np.clip(x, lo, hi) if bounds is not None else x
        f = float(objective(xc))
        if f < best["f"]:
            best["f"] = f
            best["x"] = np.array(xc)
        trace.append(best["f"])
        return f

    f0 = wrapped(x0)
    if budget > 1:
        optimize.minimize(wrapped, x0, method="Nelder-Mead",
                          options={"maxfev": budget - 1, "xatol": xatol, "fatol": fatol})
    improved = best["f"] < f0 - abs(f0) * 1e-14
    if not improved:
        best["x"], best["f"] = x0.copy(), f0
    return TuningResult(params=best["x"], value=best["f"], evaluations=count["n"],
                        improved=improved, trace=np.asarray(trace))

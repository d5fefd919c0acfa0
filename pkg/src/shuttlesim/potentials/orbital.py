"""Orbital splitting of the moving dot: 2D finite-difference eigensolve."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.interpolate import RectBivariateSpline
from scipy.sparse.linalg import eigsh

from shuttlesim.core import ELECTRON_MASS_UEV_NS2_PER_NM2, HBAR_UEV_NS, SI_EFFECTIVE_MASS
from shuttlesim.potentials.basis import PotentialField


@dataclass(frozen=True)
class OrbitalSplitting:
    """Lowest eigenvalue gap plus the Hessian-based harmonic estimate."""

    e01_uev: float
    harmonic_uev: float
    e0_uev: float
    e1_uev: float
    unbound_warning: bool


def _kinetic_coefficient(mass_rel: float) -> float:
    return HBAR_UEV_NS**2 / (2.0 * mass_rel * ELECTRON_MASS_UEV_NS2_PER_NM2)


def solve_lowest_states(v_grid: np.ndarray, spacing: float, mass_rel: float,
                        k: int = 2) -> np.ndarray:
    """Lowest k eigenvalues of -hbar^2/(2m) Lap + V with Dirichlet walls.

    ``v_grid`` is (ny, nx) in ueV on a uniform grid.
    """
    ny, nx = v_grid.shape
    c = _kinetic_coefficient(mass_rel) / spacing**2
    lap_x = sparse.diags([1, -2, 1], [-1, 0, 1], shape=(nx, nx))
    lap_y = sparse.diags([1, -2, 1], [-1, 0, 1], shape=(ny, ny))
    lap = sparse.kron(sparse.eye(ny), lap_x) + sparse.kron(lap_y, sparse.eye(nx))
    h = (-c) * lap + sparse.diags(v_grid.ravel())
    sigma = float(v_grid.min()) - 1.0
    vals = eigsh(h.tocsc(), k=k, sigma=sigma, which="LM", return_eigenvectors=False)
    return np.sort(vals)


def _hessian_at_minimum(values: np.ndarray, iy: int, ix: int, spacing: float) -> np.ndarray:
    """Quadratic least-squares fit on a 5x5 stencil around the minimum."""
    half = 2
    ys = np.arange(-half, half + 1) * spacing
    xs = np.arange(-half, half + 1) * spacing
    yy, xx = np.meshgrid(ys, xs, indexing="ij")
    patch = values[iy - half:iy + half + 1, ix - half:ix + half + 1]
    a = np.column_stack([np.ones(xx.size), xx.ravel(), yy.ravel(),
                         xx.ravel() ** 2, xx.ravel() * yy.ravel(), yy.ravel() ** 2])
    coef, *_ = np.linalg.lstsq(a, patch.ravel(), rcond=None)
    return np.array([[2 * coef[3], coef[4]], [coef[4], 2 * coef[5]]])


def orbital_splitting(field: PotentialField, minimum_xy, window_nm: float = 200.0,
                      spacing: float = 1.0, mass_rel: float = SI_EFFECTIVE_MASS,
                      ) -> OrbitalSplitting:
    """E1 - E0 of the dot confined around ``minimum_xy``.

    The window is resampled onto a uniform ``spacing`` grid (cubic spline)
    and solved with Dirichlet walls. The harmonic estimate is
    hbar * sqrt(lambda_min(Hessian) / m) from a local quadratic fit. If the
    window boundary dips below E1 the state may be unbound and the result
    carries a warning flag.
    """
    x_min, y_min = minimum_xy
    half = window_nm / 2
    grid = field.grid
    if not (grid.xs[0] <= x_min - half and x_min + half <= grid.xs[-1]
            and grid.ys[0] <= y_min - half and y_min + half <= grid.ys[-1]):
        raise ValueError("window extends beyond the sampled field")

    spline = RectBivariateSpline(grid.ys, grid.xs, field.values)
    n = int(round(window_nm / spacing)) + 1
    xs = np.linspace(x_min - half, x_min + half, n)
    ys = np.linspace(y_min - half, y_min + half, n)
    v = spline(ys, xs)
    e0, e1 = solve_lowest_states(v, xs[1] - xs[0], mass_rel, k=2)

    iy, ix = np.unravel_index(np.argmin(v), v.shape)
    iy = int(np.clip(iy, 2, n - 3))
    ix = int(np.clip(ix, 2, n - 3))
    hess = _hessian_at_minimum(v, iy, ix, xs[1] - xs[0])
    lam = np.linalg.eigvalsh(hess)
    harmonic = float(HBAR_UEV_NS * np.sqrt(max(lam[0], 0.0)
                                           / (mass_rel * ELECTRON_MASS_UEV_NS2_PER_NM2)))

    boundary_min = min(v[0, :].min(), v[-1, :].min(), v[:, 0].min(), v[:, -1].min())
    return OrbitalSplitting(e01_uev=float(e1 - e0), harmonic_uev=harmonic,
                            e0_uev=float(e0), e1_uev=float(e1),
                            unbound_warning=bool(boundary_min < e1))

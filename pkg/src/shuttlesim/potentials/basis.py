"""Pinned-surface analytic gate potentials and their superposition.

The potential of a gate held at 1 V above a grounded surface, evaluated a
depth z below the surface plane, is the boundary-value solution of the
half-space Laplace problem: Phi(r) = Omega(r) / (2 pi), with Omega the
solid angle the gate footprint subtends at the observation point. For
axis-aligned rectangles this reduces to four arctan terms; general
polygons are fanned into triangles evaluated with the Van Oosterom-
Strackee formula. Phi is dimensionless, bounded by [0, 1], and gates
superpose linearly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from shuttlesim.potentials.layout import DeviceLayout, GateSpec

# electron potential energy in ueV per (mV applied gate voltage x Phi)
UEV_PER_MV = -1000.0


@dataclass(frozen=True)
class GridSpec:
    """Regular 2D sampling grid in the 2DEG plane."""

    x0: float
    y0: float
    dx: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.dx <= 0 or self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs positive spacing and at least 2x2 points")

    @property
    def xs(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def ys(self) -> np.ndarray:
        return self.y0 + self.dx * np.arange(self.ny)

    def mesh(self):
        return np.meshgrid(self.xs, self.ys)  # (ny, nx) each

    def index_of(self, x: float, y: float) -> tuple[int, int]:
        ix = int(round((x - self.x0) / self.dx))
        iy = int(round((y - self.y0) / self.dx))
        if not (0 <= ix < self.nx and 0 <= iy < self.ny):
            raise ValueError(f"point ({x}, {y}) outside grid")
        return iy, ix

    @classmethod
    def from_bounds(cls, x_lo, x_hi, y_lo, y_hi, dx) -> "GridSpec":
        nx = int(np.floor((x_hi - x_lo) / dx)) + 1
        ny = int(np.floor((y_hi - y_lo) / dx)) + 1
        return cls(x_lo, y_lo, dx, nx, ny)


def _rect_potential(x, y, depth, x0, x1, y0, y1):
    """Phi under a pinned rectangle: (1/2pi) sum of signed arctan terms."""
    u1, u2 = x - x0, x - x1
    v1, v2 = y - y0, y - y1
    z = depth

    def g(u, v):
        return np.arctan2(u * v, z * np.sqrt(u * u + v * v + z * z))

    return (g(u1, v1) - g(u1, v2) - g(u2, v1) + g(u2, v2)) / (2.0 * np.pi)


def _polygon_potential(x, y, depth, vertices):
    """Phi under a pinned simple polygon via triangle solid angles."""
    pts = np.stack([x, y, np.zeros_like(x)], axis=-1)  # observation in plane z=0
    verts = np.column_stack([vertices, np.full(len(vertices), depth)])
    omega = np.zeros_like(x, dtype=float)
    v0 = verts[0]
    for a, b in zip(verts[1:-1], verts[2:]):
        r1 = v0 - pts
        r2 = a - pts
        r3 = b - pts
        n1 = np.linalg.norm(r1, axis=-1)
        n2 = np.linalg.norm(r2, axis=-1)
        n3 = np.linalg.norm(r3, axis=-1)
        numer = np.einsum("...i,...i->...", r1, np.cross(r2, r3))
        denom = (n1 * n2 * n3 + np.einsum("...i,...i->...", r1, r2) * n3
                 + np.einsum("...i,...i->...", r1, r3) * n2
                 + np.einsum("...i,...i->...", r2, r3) * n1)
        omega += 2.0 * np.arctan2(numer, denom)
    return np.abs(omega) / (2.0 * np.pi)


def gate_potential_at(gate: GateSpec, x, y) -> np.ndarray:
    """Unit-voltage potential Phi of one gate at 2DEG-plane points."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if gate.is_rect():
        x0, x1, y0, y1 = gate.bbox()
        return _rect_potential(x, y, gate.depth, x0, x1, y0, y1)
    return _polygon_potential(x, y, gate.depth, gate.vertices())


@dataclass(frozen=True)
class BasisPotential:
    """Phi of one binding's gates sampled on a grid (unit applied voltage)."""

    grid: GridSpec
    values: np.ndarray  # (ny, nx)
    binding: str

    def __post_init__(self):
        if self.values.shape != (self.grid.ny, self.grid.nx):
            raise ValueError("values shape does not match grid")


def gate_basis_potential(gate: GateSpec, grid: GridSpec) -> BasisPotential:
    """Sample one gate's pinned-surface potential on ``grid``.

    Requires spacing <= 10 nm so dots are resolved.
    """
    if grid.dx > 10.0:
        raise ValueError(f"grid spacing {grid.dx} nm too coarse (need <= 10 nm)")
    xx, yy = grid.mesh()
    return BasisPotential(grid, gate_potential_at(gate, xx, yy), gate.binding)


def layout_basis_potentials(layout: DeviceLayout, grid: GridSpec) -> dict[str, BasisPotential]:
    """Basis potentials accumulated per binding (gates sharing a signal sum)."""
    acc: dict[str, np.ndarray] = {}
    for gate in layout.gates:
        phi = gate_basis_potential(gate, grid).values
        if gate.binding in acc:
            acc[gate.binding] = acc[gate.binding] + phi
        else:
            acc[gate.binding] = phi
    return {b: BasisPotential(grid, v, b) for b, v in acc.items()}


@dataclass(frozen=True)
class PotentialField:
    """Electron potential energy V = -e Phi_total on a grid, in ueV."""

    grid: GridSpec
    values: np.ndarray  # (ny, nx), ueV
    t_ns: float = 0.0

    def value_at_index(self, iy: int, ix: int) -> float:
        return float(self.values[iy, ix])

    def to_csv(self, path):
        xx, yy = self.grid.mesh()
        data = np.column_stack([xx.ravel(), yy.ravel(), self.values.ravel()])
        np.savetxt(path, data, delimiter=",", header="x_nm,y_nm,V_ueV", comments="")

    def sample_along(self, points: np.ndarray) -> np.ndarray:
        """Interpolated V along (n, 2) path points."""
        from scipy.interpolate import RegularGridInterpolator

        interp = RegularGridInterpolator((self.grid.ys, self.grid.xs), self.values,
                                         bounds_error=True)
        pts = np.asarray(points, dtype=float)
        return interp(np.column_stack([pts[:, 1], pts[:, 0]]))


def compose_potential(basis: dict[str, BasisPotential], voltages_mv: dict[str, float],
                      t_ns: float = 0.0) -> PotentialField:
    """V(x, y) = -e * sum_b V_b Phi_b(x, y), in ueV.

    Every voltage key must have a basis potential and all bases must share
    one grid.
    """
    ref = next(iter(basis.values())).grid
    for b in basis.values():
        if b.grid != ref:
            raise ValueError("basis potentials sampled on mismatched grids")
    missing = set(voltages_mv) - set(basis)
    if missing:
        raise KeyError(f"no basis potential for bindings: {sorted(missing)}")
    total = np.zeros((ref.ny, ref.nx))
    for name, v in voltages_mv.items():
        if v != 0.0:
            total += v * basis[name].values
    return PotentialField(ref, UEV_PER_MV * total, t_ns=t_ns)


def compose_window(basis: dict[str, BasisPotential], voltages_mv: dict[str, float],
                   center_xy, half_nm: float, t_ns: float = 0.0) -> PotentialField:
    """Like :func:`compose_potential` but only on a window around a point.

    The window is clipped to the sampled grid; useful for tracking a dot
    through long programs without composing the full frame.
    """
    ref = next(iter(basis.values())).grid
    iy, ix = ref.index_of(*center_xy)
    h = int(round(half_nm / ref.dx))
    x_lo, x_hi = max(0, ix - h), min(ref.nx, ix + h + 1)
    y_lo, y_hi = max(0, iy - h), min(ref.ny, iy + h + 1)
    sub = GridSpec(ref.x0 + x_lo * ref.dx, ref.y0 + y_lo * ref.dx, ref.dx,
                   x_hi - x_lo, y_hi - y_lo)
    missing = set(voltages_mv) - set(basis)
    if missing:
        raise KeyError(f"no basis potential for bindings: {sorted(missing)}")
    total = np.zeros((sub.ny, sub.nx))
    for name, v in voltages_mv.items():
        if v != 0.0:
            total += v * basis[name].values[y_lo:y_hi, x_lo:x_hi]
    return PotentialField(sub, UEV_PER_MV * total, t_ns=t_ns)

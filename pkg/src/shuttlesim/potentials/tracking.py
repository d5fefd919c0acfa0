"""Tracking of the occupied potential minimum through a frame sequence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from shuttlesim.potentials.basis import compose_window
from shuttlesim.potentials.waveform import shuttle_voltages


class TrackingLostError(RuntimeError):
    def __init__(self, frame_index: int, message: str):
        super().__init__(f"frame {frame_index}: {message}")
        self.frame_index = frame_index


@dataclass(frozen=True)
class DotTrajectory:
    t_ns: np.ndarray
    x_nm: np.ndarray
    y_nm: np.ndarray
    v_min_uev: np.ndarray

    def positions(self) -> np.ndarray:
        return np.column_stack([self.x_nm, self.y_nm])

    def mean_speed(self) -> float:
        """Net displacement over elapsed time, nm/ns."""
        if self.t_ns[-1] == self.t_ns[0]:
            return 0.0
        steps = np.hypot(np.diff(self.x_nm), np.diff(self.y_nm))
        return float(np.sum(steps) / (self.t_ns[-1] - self.t_ns[0]))

    def max_frame_jump(self) -> float:
        return float(np.max(np.hypot(np.diff(self.x_nm), np.diff(self.y_nm))))

    def to_csv(self, path):
        data = np.column_stack([self.t_ns, self.x_nm, self.y_nm, self.v_min_uev])
        np.savetxt(path, data, delimiter=",", header="t_ns,x_nm,y_nm,V_ueV", comments="")


def _descend(values: np.ndarray, iy: int, ix: int, frame: int,
             max_moves: int = 100000) -> tuple[int, int]:
    """Greedy descent to the nearest local minimum on the sampled grid.

    Ties are broken by lower value, then lexicographic (x, y). Reaching the
    grid boundary means the minimum escaped the window (dot spilled).
    """
    ny, nx = values.shape
    for _ in range(max_moves):
        if iy in (0, ny - 1) or ix in (0, nx - 1):
            raise TrackingLostError(frame, "descent reached the grid boundary (spill)")
        patch = values[iy - 1:iy + 2, ix - 1:ix + 2]
        best = values[iy, ix]
        step = None
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                v = patch[dy + 1, dx + 1]
                if v < best - 1e-15 or (step is not None and v == best
                                        and (dx, dy) < step):
                    best = v
                    step = (dx, dy)
        if step is None:
            return iy, ix
        ix += step[0]
        iy += step[1]
    raise TrackingLostError(frame, "descent failed to converge")


def track_dot_minimum(fields, start_xy, max_jump_nm: float | None = None) -> DotTrajectory:
    """Follow the local minimum frame to frame, by descent from the previous
    frame's position.

    ``fields`` is a sequence of PotentialField sharing one grid. Raises
    TrackingLostError if the minimum spills out of the window or, when
    ``max_jump_nm`` is given, if the tracked position hops farther than
    that between consecutive frames.
    """
    fields = list(fields)
    if not fields:
        raise ValueError("need at least one frame")
    grid = fields[0].grid
    iy, ix = grid.index_of(*start_xy)
    ts, xs, ys, vs = [], [], [], []
    prev_xy = None
    for k, f in enumerate(fields):
        if f.grid != grid:
            raise ValueError("all frames must share one grid")
        iy, ix = _descend(f.values, iy, ix, k)
        x, y = grid.xs[ix], grid.ys[iy]
        if prev_xy is not None and max_jump_nm is not None:
            jump = np.hypot(x - prev_xy[0], y - prev_xy[1])
            if jump > max_jump_nm:
                raise TrackingLostError(k, f"minimum hopped {jump:.1f} nm > {max_jump_nm} nm")
        prev_xy = (x, y)
        ts.append(f.t_ns)
        xs.append(x)
        ys.append(y)
        vs.append(f.values[iy, ix])
    return DotTrajectory(np.asarray(ts), np.asarray(xs), np.asarray(ys), np.asarray(vs))


def track_program(basis, program, times, start_xy, window_half_nm: float = 150.0,
                  max_jump_nm: float | None = None) -> DotTrajectory:
    """Track the minimum through a waveform program on moving windows.

    Equivalent to composing full frames and calling
    :func:`track_dot_minimum`, but composes only a window around the
    previous position per frame, which keeps dense-in-time programs cheap.
    """
    xy = tuple(start_xy)
    ts, xs, ys, vs = [], [], [], []
    for k, t in enumerate(times):
        field = compose_window(basis, shuttle_voltages(program, t), xy,
                               window_half_nm, t_ns=t)
        iy, ix = field.grid.index_of(*xy)
        iy, ix = _descend(field.values, iy, ix, k)
        x, y = field.grid.xs[ix], field.grid.ys[iy]
        if ts and max_jump_nm is not None:
            jump = np.hypot(x - xy[0], y - xy[1])
            if jump > max_jump_nm:
                raise TrackingLostError(k, f"minimum hopped {jump:.1f} nm > {max_jump_nm} nm")
        xy = (x, y)
        ts.append(t)
        xs.append(x)
        ys.append(y)
        vs.append(field.values[iy, ix])
    return DotTrajectory(np.asarray(ts), np.asarray(xs), np.asarray(ys), np.asarray(vs))

"""Gate footprints and device layouts for shuttling channel elements.

Geometry lives in the xy-plane at the 2DEG; each gate carries a ``depth``,
its height above that plane. Bindings name the signal a gate listens to:

- ``clavier:<lane>:<i>``  clavier set i (1..4) of shuttling lane <lane>
- ``screen``              channel-defining screening gates
- ``top``                 global top gate
- ``ind:<k>``             individually contacted gate k
- ``set:plunger`` / ``set:barrier:<n>``  SET electrometer gates

Every fourth clavier gate along a lane shares a binding, and bindings
ascend along the lane direction so increasing phase moves the potential
minima toward larger lane coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_PITCH = 100.0
DEFAULT_CHANNEL_WIDTH = 200.0
# Deep enough that the 2DEG sees a smooth traveling wave rather than
# per-gate granularity (the wave's spatial harmonics decay as exp(-k z)).
DEFAULT_2DEG_DEPTH = 70.0
DEFAULT_GATE_WIDTH = 70.0

# metal-layer heights above the 2DEG plane
SCREEN_LAYER = 0.0
CLAVIER_LAYER = 10.0
TOP_LAYER = 20.0


def _polygon_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


@dataclass(frozen=True)
class GateSpec:
    """Polygonal gate footprint with a height above the 2DEG and a binding."""

    footprint: tuple[tuple[float, float], ...]
    depth: float
    binding: str

    def __post_init__(self):
        verts = np.asarray(self.footprint, dtype=float)
        if verts.ndim != 2 or verts.shape[0] < 3 or verts.shape[1] != 2:
            raise ValueError("footprint must list at least 3 (x, y) vertices")
        if abs(_polygon_area(verts)) < 1e-9:
            raise ValueError("degenerate footprint (zero area)")
        if self.depth <= 0:
            raise ValueError(f"gate depth must be positive, got {self.depth}")
        object.__setattr__(self, "footprint", tuple(map(tuple, verts)))

    @classmethod
    def rect(cls, x0, x1, y0, y1, depth, binding) -> "GateSpec":
        if x1 <= x0 or y1 <= y0:
            raise ValueError("rectangle must have positive extent")
        return cls(((x0, y0), (x1, y0), (x1, y1), (x0, y1)), depth, binding)

    def vertices(self) -> np.ndarray:
        return np.asarray(self.footprint, dtype=float)

    def is_rect(self) -> bool:
        v = self.vertices()
        if len(v) != 4:
            return False
        xs, ys = sorted(set(v[:, 0])), sorted(set(v[:, 1]))
        return len(xs) == 2 and len(ys) == 2

    def bbox(self):
        v = self.vertices()
        return v[:, 0].min(), v[:, 0].max(), v[:, 1].min(), v[:, 1].max()


@dataclass(frozen=True)
class LaneAxis:
    """Channel centerline of one shuttling lane.

    ``origin`` is the center of the binding-1 gate of the first clavier
    period; ``direction`` the (unit) travel direction for increasing phase.
    The traveling-wave minimum for phase phi sits at lane coordinate
    ``4 * pitch * phi / (2 pi)`` from the origin (mod one period).
    """

    origin: tuple[float, float]
    direction: tuple[float, float]
    n_gates: int
    pitch: float = DEFAULT_PITCH

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        norm = np.linalg.norm(d)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError("lane direction must be a unit vector")
        if self.n_gates < 4:
            raise ValueError("a lane needs at least one full clavier period (4 gates)")

    @property
    def wavelength(self) -> float:
        return 4.0 * self.pitch

    def point_at(self, s: float | np.ndarray) -> np.ndarray:
        o = np.asarray(self.origin, dtype=float)
        d = np.asarray(self.direction, dtype=float)
        return o + np.multiply.outer(np.asarray(s, dtype=float), d)

    def minimum_position(self, phi: float) -> float:
        """Lane coordinate of the nominal wave minimum for phase ``phi``."""
        return self.wavelength * phi / (2.0 * np.pi)

    def phase_for_position(self, s: float) -> float:
        return 2.0 * np.pi * s / self.wavelength


@dataclass(frozen=True)
class DeviceLayout:
    gates: tuple[GateSpec, ...]
    lanes: tuple[LaneAxis, ...]
    pitch: float = DEFAULT_PITCH
    channel_width: float = DEFAULT_CHANNEL_WIDTH
    kind: str = "custom"
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        for lane_idx in range(len(self.lanes)):
            sets = {g.binding for g in self.gates if g.binding.startswith(f"clavier:{lane_idx}:")}
            if sets and sets != {f"clavier:{lane_idx}:{i}" for i in range(1, 5)}:
                raise ValueError(f"lane {lane_idx} must cycle through clavier sets 1..4")

    def bindings(self) -> tuple[str, ...]:
        seen = {}
        for g in self.gates:
            seen.setdefault(g.binding, None)
        return tuple(seen)

    def bbox(self, margin: float = 0.0):
        boxes = np.array([g.bbox() for g in self.gates if g.binding != "top"])
        return (boxes[:, 0].min() - margin, boxes[:, 1].max() + margin,
                boxes[:, 2].min() - margin, boxes[:, 3].max() + margin)


def _clavier_fingers(lane_idx, axis: LaneAxis, gate_width, finger_half, depth,
                     finger_half_neg=None):
    """Finger gates crossing the channel, bindings cycling 1..4 along the lane.

    ``finger_half_neg`` shortens the finger on the -perp side (used at
    junction mouths).
    """
    gates = []
    o = np.asarray(axis.origin, float)
    d = np.asarray(axis.direction, float)
    perp = np.array([-d[1], d[0]])
    neg = finger_half if finger_half_neg is None else finger_half_neg
    for j in range(axis.n_gates):
        center = o + j * axis.pitch * d
        along = 0.5 * gate_width * d
        corners = (center - along - neg * perp, center + along - neg * perp,
                   center + along + finger_half * perp, center - along + finger_half * perp)
        gates.append(GateSpec(tuple(map(tuple, corners)), depth,
                              f"clavier:{lane_idx}:{j % 4 + 1}"))
    return gates


def straight_lane_layout(n_gates: int = 12, pitch: float = DEFAULT_PITCH,
                         channel_width: float = DEFAULT_CHANNEL_WIDTH,
                         gate_width: float = DEFAULT_GATE_WIDTH,
                         depth_2deg: float = DEFAULT_2DEG_DEPTH,
                         start_x: float = 0.0) -> DeviceLayout:
    """Single shuttling lane along x, centered on y = 0."""
    axis = LaneAxis(origin=(start_x, 0.0), direction=(1.0, 0.0), n_gates=n_gates, pitch=pitch)
    half_w = channel_width / 2
    finger_half = half_w + 50.0
    x_lo, x_hi = start_x - pitch, start_x + (n_gates - 1) * pitch + pitch
    gates = _clavier_fingers(0, axis, gate_width, finger_half, depth_2deg + CLAVIER_LAYER)
    for sgn in (+1, -1):
        gates.append(GateSpec.rect(x_lo, x_hi, *sorted((sgn * half_w, sgn * (half_w + 200))),
                                   depth_2deg + SCREEN_LAYER, "screen"))
    gates.append(GateSpec.rect(x_lo - 200, x_hi + 200, -half_w - 400, half_w + 400,
                               depth_2deg + TOP_LAYER, "top"))
    return DeviceLayout(tuple(gates), (axis,), pitch, channel_width, kind="straight")


def t_junction_layout(n_bar: int = 13, n_stem: int = 8, pitch: float = DEFAULT_PITCH,
                      channel_width: float = DEFAULT_CHANNEL_WIDTH,
                      gate_width: float = DEFAULT_GATE_WIDTH,
                      depth_2deg: float = DEFAULT_2DEG_DEPTH,
                      stem_start: float = 100.0, central_cut: float = 50.0,
                      mouth_half: float = 200.0, chamfer: float = 150.0) -> DeviceLayout:
    """Two perpendicular lanes joined in a T.

    Lane 0 (the bar) runs along x through y = 0 with the junction at x = 0;
    lane 1 (the stem) runs downward along -y, its first gate ``stem_start``
    below the bar center (reaching into the junction mouth). Tuned for a
    continuous corner handoff: the central bar fingers stop ``central_cut``
    below the lane so the stem wave can grab the dot, the bar's lower
    screening gate opens ``2 * mouth_half`` around the mouth, and the stem
    screening is chamfered back from the junction.
    """
    half_w = channel_width / 2
    finger_half = half_w + 50.0
    half_bar = (n_bar - 1) // 2
    bar = LaneAxis(origin=(-half_bar * pitch, 0.0), direction=(1.0, 0.0),
                   n_gates=n_bar, pitch=pitch)
    stem = LaneAxis(origin=(0.0, -stem_start), direction=(0.0, -1.0),
                    n_gates=n_stem, pitch=pitch)
    clav_depth = depth_2deg + CLAVIER_LAYER
    scr_depth = depth_2deg + SCREEN_LAYER

    gates = []
    o = np.asarray(bar.origin, float)
    for j in range(n_bar):
        xc = o[0] + j * pitch
        y_neg = -central_cut if abs(xc) <= 150.0 else -half_w
        gates.append(GateSpec.rect(xc - gate_width / 2, xc + gate_width / 2,
                                   y_neg, finger_half, clav_depth,
                                   f"clavier:0:{j % 4 + 1}"))
    gates += _clavier_fingers(1, stem, gate_width, finger_half, clav_depth)

    x_lo, x_hi = -half_bar * pitch - pitch, half_bar * pitch + pitch
    y_bottom = -stem_start - (n_stem - 1) * pitch - pitch
    # bar screening: solid above, split below around the stem mouth
    gates.append(GateSpec.rect(x_lo, x_hi, half_w, half_w + 200, scr_depth, "screen"))
    gates.append(GateSpec.rect(x_lo, -mouth_half, -half_w - 200, -half_w, scr_depth, "screen"))
    gates.append(GateSpec.rect(mouth_half, x_hi, -half_w - 200, -half_w, scr_depth, "screen"))
    # stem screening, chamfered back from the junction mouth
    for sgn in (+1, -1):
        lo, hi = sorted((sgn * half_w, sgn * (half_w + 200)))
        gates.append(GateSpec.rect(lo, hi, y_bottom, -half_w - chamfer, scr_depth, "screen"))
    gates.append(GateSpec.rect(x_lo - 200, x_hi + 200, y_bottom - 200, half_w + 400,
                               depth_2deg + TOP_LAYER, "top"))
    return DeviceLayout(tuple(gates), (bar, stem), pitch, channel_width, kind="t_junction",
                        extras={"stem_start": stem_start})


def manipulation_zone_layout(n_per_side: int = 5, pitch: float = DEFAULT_PITCH,
                             channel_width: float = DEFAULT_CHANNEL_WIDTH,
                             gate_width: float = DEFAULT_GATE_WIDTH,
                             depth_2deg: float = DEFAULT_2DEG_DEPTH,
                             clearance: float = 100.0) -> DeviceLayout:
    """Two collinear lanes meeting head-on at x = 0.

    Lane 0 drives a dot in from the left, lane 1 from the right; their
    nominal minima for equal phases sit at mirror positions, which keeps
    the double well at zero detuning by symmetry.
    """
    half_gap = clearance / 2
    start = half_gap + (n_per_side - 1) * pitch
    left = LaneAxis(origin=(-start, 0.0), direction=(1.0, 0.0), n_gates=n_per_side, pitch=pitch)
    right = LaneAxis(origin=(start, 0.0), direction=(-1.0, 0.0), n_gates=n_per_side, pitch=pitch)
    clav_depth = depth_2deg + CLAVIER_LAYER
    half_w = channel_width / 2
    gates = _clavier_fingers(0, left, gate_width, half_w + 50, clav_depth)
    gates += _clavier_fingers(1, right, gate_width, half_w + 50, clav_depth)
    x_lo, x_hi = -start - pitch, start + pitch
    for sgn in (+1, -1):
        lo, hi = sorted((sgn * half_w, sgn * (half_w + 200)))
        gates.append(GateSpec.rect(x_lo, x_hi, lo, hi, depth_2deg + SCREEN_LAYER, "screen"))
    gates.append(GateSpec.rect(x_lo - 200, x_hi + 200, -half_w - 400, half_w + 400,
                               depth_2deg + TOP_LAYER, "top"))
    return DeviceLayout(tuple(gates), (left, right), pitch, channel_width,
                        kind="manipulation_zone", extras={"clearance": clearance})


def ir_zone_layout(n_clavier: int = 8, pitch: float = DEFAULT_PITCH,
                   channel_width: float = DEFAULT_CHANNEL_WIDTH,
                   gate_width: float = DEFAULT_GATE_WIDTH,
                   depth_2deg: float = DEFAULT_2DEG_DEPTH) -> DeviceLayout:
    """Initialization/readout zone: SET gates, two individual gates, one lane.

    The SET sits left of x = 0; two individually contacted gates control the
    tunnel barrier to the SET and the first channel dot; the clavier lane
    starts at x = 300 nm.
    """
    half_w = channel_width / 2
    axis = LaneAxis(origin=(300.0, 0.0), direction=(1.0, 0.0), n_gates=n_clavier, pitch=pitch)
    clav_depth = depth_2deg + CLAVIER_LAYER
    gates = [
        GateSpec.rect(-250, -180, -half_w - 20, half_w + 20, clav_depth, "set:barrier:1"),
        GateSpec.rect(-160, -40, -half_w - 20, half_w + 20, clav_depth, "set:plunger"),
        GateSpec.rect(-20, 50, -half_w - 20, half_w + 20, clav_depth, "set:barrier:2"),
        GateSpec.rect(75, 125, -half_w - 50, half_w + 50, clav_depth, "ind:1"),
        GateSpec.rect(175, 225, -half_w - 50, half_w + 50, clav_depth, "ind:2"),
    ]
    gates += _clavier_fingers(0, axis, gate_width, half_w + 50, clav_depth)
    x_lo, x_hi = -350.0, 300.0 + (n_clavier - 1) * pitch + pitch
    for sgn in (+1, -1):
        lo, hi = sorted((sgn * half_w, sgn * (half_w + 200)))
        gates.append(GateSpec.rect(x_lo, x_hi, lo, hi, depth_2deg + SCREEN_LAYER, "screen"))
    gates.append(GateSpec.rect(x_lo - 200, x_hi + 200, -half_w - 400, half_w + 400,
                               depth_2deg + TOP_LAYER, "top"))
    return DeviceLayout(tuple(gates), (axis,), pitch, channel_width, kind="ir_zone")

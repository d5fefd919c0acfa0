"""Four-phase clavier waveforms and phase programs for shuttling.

Clavier set i of a lane is driven with V_i = A cos(phi(t) - dphi_i),
dphi_i = pi/2 * (i - 1). A linear phase ramp translates the potential
minima at speed lambda * (dphi/dt) / (2 pi) with lambda = 4 * pitch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from shuttlesim.potentials.layout import DeviceLayout

PHASE_OFFSETS = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)

# generous ceiling on the nominal wave speed; programs exceeding it fail
# their smoothness/duration validation
DEFAULT_MAX_SPEED_NM_PER_NS = 40.0


@dataclass(frozen=True)
class PhaseSegment:
    t0: float
    t1: float
    phi0: float
    phi1: float
    shape: str = "linear"  # or "raised_cosine"

    def __post_init__(self):
        if self.t1 <= self.t0:
            raise ValueError("segment must have positive duration")
        if self.shape not in ("linear", "raised_cosine"):
            raise ValueError(f"unknown segment shape {self.shape!r}")

    def value(self, t):
        s = (np.asarray(t) - self.t0) / (self.t1 - self.t0)
        if self.shape == "linear":
            frac = s
        else:
            frac = 0.5 * (1.0 - np.cos(np.pi * s))
        return self.phi0 + (self.phi1 - self.phi0) * frac

    def max_rate(self) -> float:
        span = abs(self.phi1 - self.phi0) / (self.t1 - self.t0)
        return span * (np.pi / 2 if self.shape == "raised_cosine" else 1.0)


@dataclass(frozen=True)
class PhaseTrajectory:
    """Piecewise phase program, continuous across segments."""

    segments: tuple[PhaseSegment, ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("trajectory needs at least one segment")
        for a, b in zip(self.segments, self.segments[1:]):
            if abs(a.t1 - b.t0) > 1e-9 or abs(a.phi1 - b.phi0) > 1e-9:
                raise ValueError("segments must be contiguous and phase-continuous")

    @property
    def t_start(self) -> float:
        return self.segments[0].t0

    @property
    def t_end(self) -> float:
        return self.segments[-1].t1

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.empty_like(t)
        remaining = np.ones(t.shape, dtype=bool)
        for seg in self.segments:
            mask = remaining & (t <= seg.t1 + 1e-12)
            out[mask] = seg.value(t[mask])
            remaining &= ~mask
        if np.any(remaining):
            raise ValueError("time outside trajectory range")
        return out if out.ndim else float(out)

    def max_rate(self) -> float:
        return max(seg.max_rate() for seg in self.segments)

    def reversed(self) -> "PhaseTrajectory":
        t_end = self.t_end
        segs = tuple(
            PhaseSegment(t_end - s.t1, t_end - s.t0, s.phi1, s.phi0, s.shape)
            for s in reversed(self.segments)
        )
        return PhaseTrajectory(segs)

    @classmethod
    def constant(cls, phi: float, duration: float) -> "PhaseTrajectory":
        return cls((PhaseSegment(0.0, duration, phi, phi, "linear"),))

    @classmethod
    def single(cls, phi0: float, phi1: float, duration: float,
               shape: str = "raised_cosine") -> "PhaseTrajectory":
        return cls((PhaseSegment(0.0, duration, phi0, phi1, shape),))

    def breakpoints(self) -> list[tuple[float, float]]:
        pts = [(self.segments[0].t0, self.segments[0].phi0)]
        pts += [(s.t1, s.phi1) for s in self.segments]
        return pts


@dataclass(frozen=True)
class WaveformProgram:
    """Amplitude, per-lane phase trajectories, and static gate voltages."""

    amplitude_mv: float
    lane_phases: tuple[PhaseTrajectory, ...]
    static_mv: dict = field(default_factory=dict)
    duration_ns: float = 0.0

    def __post_init__(self):
        if not self.lane_phases:
            raise ValueError("program needs at least one lane")
        dur = self.duration_ns or max(tr.t_end for tr in self.lane_phases)
        object.__setattr__(self, "duration_ns", float(dur))
        for tr in self.lane_phases:
            if tr.t_end < self.duration_ns - 1e-9:
                raise ValueError("every lane trajectory must cover the program duration")

    @property
    def phase_offsets(self):
        return PHASE_OFFSETS

    def reversed(self) -> "WaveformProgram":
        return WaveformProgram(self.amplitude_mv,
                               tuple(tr.reversed() for tr in self.lane_phases),
                               dict(self.static_mv), self.duration_ns)

    def times(self, n_frames: int) -> np.ndarray:
        return np.linspace(0.0, self.duration_ns, n_frames)


def shuttle_voltages(program: WaveformProgram, t: float) -> dict[str, float]:
    """Gate voltages (mV) at time t: clavier cosines plus statics unchanged."""
    if not (0.0 <= t <= program.duration_ns + 1e-9):
        raise ValueError(f"t = {t} outside program duration {program.duration_ns}")
    out = dict(program.static_mv)
    for lane_idx, trajectory in enumerate(program.lane_phases):
        phi = trajectory(min(t, trajectory.t_end))
        for i, dphi in enumerate(PHASE_OFFSETS, start=1):
            out[f"clavier:{lane_idx}:{i}"] = program.amplitude_mv * math.cos(phi - dphi)
    return out


DEFAULT_STATICS = {"top": 100.0, "screen": -50.0}


def _check_speed(layout, trajectories, max_speed):
    for lane, tr in zip(layout.lanes, trajectories):
        speed = lane.wavelength * tr.max_rate() / (2 * np.pi)
        if speed > max_speed:
            raise ValueError(
                f"phase program implies wave speed {speed:.1f} nm/ns > {max_speed} nm/ns; "
                f"increase the duration")


# Parked lanes idle with a wave crest on their first gate, which keeps
# their junction mouth closed while another lane shuttles past.
PARKED_PHASE = math.pi


def straight_shuttle_program(layout: DeviceLayout, start_s: float, end_s: float,
                             duration_ns: float, lane: int = 0,
                             amplitude_mv: float = 100.0, statics=None,
                             shape: str = "linear", parked_phase: float = PARKED_PHASE,
                             max_speed=DEFAULT_MAX_SPEED_NM_PER_NS) -> WaveformProgram:
    """Translate the minimum of one lane from coordinate start_s to end_s.

    Other lanes (if any) are held at ``parked_phase``.
    """
    axis = layout.lanes[lane]
    phi0 = axis.phase_for_position(start_s)
    phi1 = axis.phase_for_position(end_s)
    trajectories = []
    for idx in range(len(layout.lanes)):
        if idx == lane:
            trajectories.append(PhaseTrajectory.single(phi0, phi1, duration_ns, shape))
        else:
            trajectories.append(PhaseTrajectory.constant(parked_phase, duration_ns))
    _check_speed(layout, trajectories, max_speed)
    return WaveformProgram(amplitude_mv, tuple(trajectories),
                           dict(DEFAULT_STATICS if statics is None else statics), duration_ns)


def corner_shuttle_program(layout: DeviceLayout, duration_ns: float,
                           approach_nm: float = 350.0, exit_nm: float = 600.0,
                           amplitude_mv: float = 100.0, statics=None,
                           max_speed=DEFAULT_MAX_SPEED_NM_PER_NS) -> WaveformProgram:
    """Carry a dot along the bar to the junction, then down the stem.

    Segment 1 ramps the bar phase (raised cosine) until its minimum rests
    at the junction. The stem idles with its leading trough parked one
    pitch down, which keeps the mouth neutral during the approach. Segment
    2 freezes the bar and advances the stem phase far enough that the next
    trough sweeps through the mouth, picks the dot up, and carries it to
    ``exit_nm`` below the bar. Both ramps are continuously differentiable;
    durations implying wave speeds above ``max_speed`` raise.
    """
    if layout.kind != "t_junction":
        raise ValueError("corner program requires a T-junction layout")
    bar, stem = layout.lanes[0], layout.lanes[1]
    s_junction = -bar.origin[0]  # bar coordinate of the junction
    phi_bar_end = bar.phase_for_position(s_junction)
    phi_bar_start = bar.phase_for_position(s_junction - approach_nm)
    stem_start = layout.extras["stem_start"]
    if exit_nm <= stem_start:
        raise ValueError(f"exit_nm must exceed the stem offset {stem_start} nm")
    phi_stem_park = stem.phase_for_position(stem.pitch)
    # final trough position in stem coordinates, reached by the trough that
    # enters the array from above (one wavelength behind the parked one)
    s_end = exit_nm - stem_start
    phi_stem_end = stem.phase_for_position(s_end + stem.wavelength)

    stem_travel = (phi_stem_end - phi_stem_park) * stem.wavelength / (2 * math.pi)
    t_mid = duration_ns * approach_nm / (approach_nm + stem_travel)
    bar_tr = PhaseTrajectory((
        PhaseSegment(0.0, t_mid, phi_bar_start, phi_bar_end, "raised_cosine"),
        PhaseSegment(t_mid, duration_ns, phi_bar_end, phi_bar_end, "linear"),
    ))
    stem_tr = PhaseTrajectory((
        PhaseSegment(0.0, t_mid, phi_stem_park, phi_stem_park, "linear"),
        PhaseSegment(t_mid, duration_ns, phi_stem_park, phi_stem_end, "raised_cosine"),
    ))
    _check_speed(layout, (bar_tr, stem_tr), max_speed)
    return WaveformProgram(amplitude_mv, (bar_tr, stem_tr),
                           dict(DEFAULT_STATICS if statics is None else statics), duration_ns)


def approach_program(layout: DeviceLayout, s_start: float, s_end: float,
                     duration_ns: float, hold_ns: float = 0.0,
                     amplitude_mv: float = 100.0, statics=None,
                     max_speed=DEFAULT_MAX_SPEED_NM_PER_NS) -> WaveformProgram:
    """Symmetric two-dot approach in a manipulation zone.

    Both lanes ramp their phases identically (raised cosine), carrying the
    left dot from -s_start to -s_end and the right dot mirror-symmetric,
    then optionally hold. Lane coordinates: the left lane origin maps
    s = 0 to its first gate, so a dot at distance d/2 from the junction
    sits at lane coordinate start - d/2 with start the origin offset.
    """
    if layout.kind != "manipulation_zone":
        raise ValueError("approach program requires a manipulation-zone layout")
    left = layout.lanes[0]
    s_origin = -left.origin[0]  # junction at this lane coordinate
    phi0 = left.phase_for_position(s_origin - s_start)
    phi1 = left.phase_for_position(s_origin - s_end)
    segs = [PhaseSegment(0.0, duration_ns, phi0, phi1, "raised_cosine")]
    if hold_ns > 0:
        segs.append(PhaseSegment(duration_ns, duration_ns + hold_ns, phi1, phi1, "linear"))
    tr = PhaseTrajectory(tuple(segs))
    _check_speed(layout, (tr, tr), max_speed)
    return WaveformProgram(amplitude_mv, (tr, tr),
                           dict(DEFAULT_STATICS if statics is None else statics),
                           duration_ns + hold_ns)

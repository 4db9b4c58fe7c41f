"""Two-stage trajectory trees.

Each branch pairs a cubic longitudinal velocity profile (start and end
acceleration zero, commanded terminal velocity) with a quintic lateral
offset polynomial (zero first and second derivatives at both ends,
commanded terminal offset), sampled on a fixed grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import ReferenceLine


class TrajectoryError(ValueError):
    pass


@dataclass(frozen=True)
class VehicleState:
    station: float
    lateral: float
    v_long: float
    v_lat: float = 0.0

    def world(self, line: ReferenceLine):
        xy, heading = line.world([self.station], [self.lateral])
        return xy[0], float(heading[0])


@dataclass(frozen=True)
class IntentionSpec:
    """A driving intention: navigation (reference line) plus sampled
    terminal-velocity and terminal-lateral-offset action lists."""

    name: str
    ref_line: str
    speeds: tuple[float, ...]
    laterals: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        if not self.speeds or not self.laterals:
            raise TrajectoryError(f"intention {self.name}: empty action list")
        if any(v < 0 for v in self.speeds):
            raise TrajectoryError(
                f"intention {self.name}: negative terminal velocity")

    @property
    def n_actions(self) -> int:
        return len(self.speeds) * len(self.laterals)

    def action_label(self, action: int) -> tuple[float, float]:
        iv, il = divmod(action, len(self.laterals))
        return self.speeds[iv], self.laterals[il]


@dataclass
class Segment:
    """One stage's motion, sampled at dt including both endpoints."""

    duration: float
    t: np.ndarray
    s: np.ndarray
    l: np.ndarray  # noqa: E741
    v_long: np.ndarray
    v_lat: np.ndarray
    a_long: np.ndarray
    a_lat: np.ndarray
    j_long: np.ndarray
    j_lat: np.ndarray
    xy: np.ndarray = field(default=None)
    heading: np.ndarray = field(default=None)

    def attach_world(self, line: ReferenceLine) -> None:
        self.xy, self.heading = line.world(self.s, self.l)

    def state_at(self, tau: float) -> VehicleState:
        idx = int(round(tau / (self.t[1] - self.t[0])))
        idx = min(idx, len(self.t) - 1)
        return VehicleState(station=float(self.s[idx]),
                            lateral=float(self.l[idx]),
                            v_long=float(self.v_long[idx]),
                            v_lat=float(self.v_lat[idx]))

    @property
    def end_state(self) -> VehicleState:
        return self.state_at(self.duration)


def build_segment(start: VehicleState, v_f: float, l_f: float,
                  duration: float, dt: float) -> Segment:
    if duration <= 0 or dt <= 0:
        raise TrajectoryError("duration and dt must be positive")
    n = int(round(duration / dt))
    if abs(n * dt - duration) > 1e-9:
        raise TrajectoryError("duration must be a multiple of dt")
    t = np.arange(n + 1) * dt
    u = t / duration

    dv = v_f - start.v_long
    v = start.v_long + dv * (3 * u**2 - 2 * u**3)
    a = dv * (6 * u - 6 * u**2) / duration
    j = dv * (6 - 12 * u) / duration**2
    s = start.station + start.v_long * t + dv * duration * (u**3 - 0.5 * u**4)

    dl = l_f - start.lateral
    blend = 10 * u**3 - 15 * u**4 + 6 * u**5
    lat = start.lateral + dl * blend
    v_lat = dl * (30 * u**2 - 60 * u**3 + 30 * u**4) / duration
    a_lat = dl * (60 * u - 180 * u**2 + 120 * u**3) / duration**2
    j_lat = dl * (60 - 360 * u + 360 * u**2) / duration**3

    return Segment(duration=duration, t=t, s=s, l=lat, v_long=v, v_lat=v_lat,
                   a_long=a, a_lat=a_lat, j_long=j, j_lat=j_lat)


@dataclass
class TrajectoryTree:
    """Stage-1 branches indexed by action; per branch, stage-2 branches.

    ``labels[a]`` is the (terminal velocity, terminal lateral offset)
    commanded by action ``a``; the same list applies at both stages.
    """

    labels: tuple[tuple[float, float], ...]
    stage1: list[Segment]
    stage2: list[list[Segment]]
    intent: IntentionSpec | None = None

    @property
    def n_actions(self) -> int:
        return len(self.stage1)


def build_tree(state: VehicleState, labels, line: ReferenceLine,
               stage_durations, dt: float,
               intent: IntentionSpec | None = None) -> TrajectoryTree:
    """Trajectory tree over an explicit (v_f, l_f) action-label list."""
    if len(stage_durations) != 2:
        raise TrajectoryError("expected exactly two stage durations")
    labels = tuple((float(v), float(l)) for v, l in labels)
    if not labels:
        raise TrajectoryError("empty action-label list")
    stage1 = []
    stage2 = []
    for v_f, l_f in labels:
        seg = build_segment(state, v_f, l_f, stage_durations[0], dt)
        seg.attach_world(line)
        stage1.append(seg)
        children = []
        start2 = seg.end_state
        # quintic restarts with zero lateral derivatives at the boundary
        start2 = VehicleState(station=start2.station, lateral=start2.lateral,
                              v_long=start2.v_long, v_lat=0.0)
        for v_f2, l_f2 in labels:
            child = build_segment(start2, v_f2, l_f2, stage_durations[1], dt)
            child.attach_world(line)
            children.append(child)
        stage2.append(children)
    return TrajectoryTree(labels=labels, stage1=stage1, stage2=stage2,
                          intent=intent)


def build_trajectory_tree(state: VehicleState, intent: IntentionSpec,
                          line: ReferenceLine, stage_durations,
                          dt: float) -> TrajectoryTree:
    labels = [intent.action_label(a) for a in range(intent.n_actions)]
    return build_tree(state, labels, line, stage_durations, dt, intent=intent)

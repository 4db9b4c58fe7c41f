"""Reference lines: arc-length parameterized polylines with a Frenet-style
(s, l) frame.  Lateral offset l is positive to the left of the tangent."""

from __future__ import annotations

import math

import numpy as np


class GeometryError(ValueError):
    pass


class ReferenceLine:
    def __init__(self, points: np.ndarray):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[0] < 2 or points.shape[1] != 2:
            raise GeometryError("need a polyline of at least two 2D points")
        deltas = np.diff(points, axis=0)
        seg_len = np.hypot(deltas[:, 0], deltas[:, 1])
        if np.any(seg_len <= 1e-12):
            raise GeometryError("polyline has zero-length segments")
        self.points = points
        self.seg_len = seg_len
        self.cum = np.concatenate([[0.0], np.cumsum(seg_len)])
        self.tangents = deltas / seg_len[:, None]

    @property
    def length(self) -> float:
        return float(self.cum[-1])

    def _segment(self, s: float) -> tuple[int, float]:
        """Segment index and local offset; extrapolates beyond both ends."""
        if s <= 0.0:
            return 0, s
        if s >= self.length:
            return len(self.seg_len) - 1, s - float(self.cum[-2])
        idx = int(np.searchsorted(self.cum, s, side="right")) - 1
        return idx, s - float(self.cum[idx])

    def pose(self, s: float) -> tuple[np.ndarray, float]:
        """World position and heading at station s."""
        idx, ds = self._segment(s)
        tangent = self.tangents[idx]
        pos = self.points[idx] + tangent * ds
        return pos, math.atan2(tangent[1], tangent[0])

    def world(self, s, l):  # noqa: E741 - lateral offset
        """Vectorized (s, l) -> world xy and heading."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        l = np.atleast_1d(np.asarray(l, dtype=float))  # noqa: E741
        idx = np.searchsorted(self.cum, s, side="right") - 1
        idx = np.clip(idx, 0, len(self.seg_len) - 1)
        ds = s - self.cum[idx]
        tan = self.tangents[idx]
        pos = self.points[idx] + tan * ds[:, None]
        normal = np.column_stack([-tan[:, 1], tan[:, 0]])
        xy = pos + l[:, None] * normal
        heading = np.arctan2(tan[:, 1], tan[:, 0])
        return xy, heading

    def project(self, xy) -> tuple[float, float]:
        """World point -> (s, l); nearest point on the (extended) line."""
        p = np.asarray(xy, dtype=float)
        best = None
        for idx in range(len(self.seg_len)):
            a = self.points[idx]
            t = self.tangents[idx]
            ds = float(np.dot(p - a, t))
            if idx > 0:
                ds = max(ds, 0.0)
            if idx < len(self.seg_len) - 1:
                ds = min(ds, float(self.seg_len[idx]))
            foot = a + t * ds
            dist = float(np.hypot(*(p - foot)))
            if best is None or dist < best[0]:
                normal = np.array([-t[1], t[0]])
                lat = float(np.dot(p - foot, normal))
                best = (dist, float(self.cum[idx]) + ds, lat)
        return best[1], best[2]


def straight_line(start, heading_deg: float, length: float,
                  step: float = 1.0) -> ReferenceLine:
    h = math.radians(heading_deg)
    n = max(2, int(math.ceil(length / step)) + 1)
    s = np.linspace(0.0, length, n)
    pts = np.column_stack([start[0] + s * math.cos(h),
                           start[1] + s * math.sin(h)])
    return ReferenceLine(pts)


def lane_shift_line(y_from: float, y_to: float, x_start: float, x_end: float,
                    x_min: float = 0.0, x_max: float = 150.0,
                    step: float = 0.5) -> ReferenceLine:
    """Line along +x that blends smoothly from y_from to y_to between
    x_start and x_end (cosine blend, C1 at both ends)."""
    if not x_min < x_start < x_end < x_max:
        raise GeometryError("need x_min < x_start < x_end < x_max")
    x = np.arange(x_min, x_max + step, step)
    u = np.clip((x - x_start) / (x_end - x_start), 0.0, 1.0)
    y = y_from + (y_to - y_from) * 0.5 * (1.0 - np.cos(np.pi * u))
    return ReferenceLine(np.column_stack([x, y]))


def turn_line(start, heading_deg: float, approach: float, radius: float,
              turn_deg: float, exit_length: float,
              step: float = 0.5) -> ReferenceLine:
    """Straight approach, circular arc (positive turn_deg = left), then a
    straight exit."""
    h = math.radians(heading_deg)
    pts = [np.asarray(start, dtype=float)]
    n_app = max(1, int(math.ceil(approach / step)))
    for i in range(1, n_app + 1):
        d = approach * i / n_app
        pts.append(pts[0] + d * np.array([math.cos(h), math.sin(h)]))
    corner = pts[-1]
    sign = 1.0 if turn_deg >= 0 else -1.0
    center = corner + radius * np.array([-math.sin(h), math.cos(h)]) * sign
    total = abs(math.radians(turn_deg))
    n_arc = max(2, int(math.ceil(radius * total / step)))
    start_angle = math.atan2(corner[1] - center[1], corner[0] - center[0])
    for i in range(1, n_arc + 1):
        ang = start_angle + sign * total * i / n_arc
        pts.append(center + radius * np.array([math.cos(ang), math.sin(ang)]))
    h_out = h + math.radians(turn_deg)
    tail = pts[-1]
    n_exit = max(1, int(math.ceil(exit_length / step)))
    for i in range(1, n_exit + 1):
        d = exit_length * i / n_exit
        pts.append(tail + d * np.array([math.cos(h_out), math.sin(h_out)]))
    return ReferenceLine(np.asarray(pts))

"""Driving utility: comfort, progress, reference and safety indices.

All indices are per-sample sums (no dt weighting) over the joint horizon
h = 0..H and are nonnegative; the utility is their negated sum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .trajectories import Segment


@dataclass(frozen=True)
class UtilityParams:
    w_a_lat: float = 0.5
    w_a_long: float = 1.0
    w_j_lat: float = 0.5
    w_j_long: float = 1.0
    w_p: float = 20.0
    w_ref: float = 10.0
    w_s: float = 2000.0
    d: float = 4.0            # safe center distance, m
    v_slow: float = 5.0       # progress threshold, m/s
    circle_offset: float = 1.15
    circle_radius: float = 1.15
    dt: float = 0.1

    def override(self, **kwargs) -> "UtilityParams":
        return replace(self, **kwargs)


@dataclass
class SampledPath:
    """Concatenated per-sample kinematics of one vehicle over the horizon."""

    l: np.ndarray  # noqa: E741
    v_long: np.ndarray
    a_long: np.ndarray
    a_lat: np.ndarray
    j_long: np.ndarray
    j_lat: np.ndarray
    xy: np.ndarray
    heading: np.ndarray

    def __len__(self) -> int:
        return len(self.v_long)


def concat_segments(segments: list[Segment]) -> SampledPath:
    """Chain segments dropping each boundary's duplicate first sample."""

    def chain(attr):
        parts = [getattr(segments[0], attr)]
        parts += [getattr(seg, attr)[1:] for seg in segments[1:]]
        return np.concatenate(parts)

    return SampledPath(l=chain("l"), v_long=chain("v_long"),
                       a_long=chain("a_long"), a_lat=chain("a_lat"),
                       j_long=chain("j_long"), j_lat=chain("j_lat"),
                       xy=chain("xy"), heading=chain("heading"))


def comfort_cost(path: SampledPath, params: UtilityParams) -> float:
    return float(params.w_a_lat * np.sum(path.a_lat**2)
                 + params.w_j_lat * np.sum(path.j_lat**2)
                 + params.w_a_long * np.sum(path.a_long**2)
                 + params.w_j_long * np.sum(path.j_long**2))


def progress_cost(path: SampledPath, params: UtilityParams) -> float:
    slow = np.minimum(path.v_long - params.v_slow, 0.0)
    return float(params.w_p * np.sum(slow**2))


def reference_cost(path: SampledPath, params: UtilityParams) -> float:
    return float(params.w_ref * np.sum(path.l**2))


def circle_centers(path: SampledPath, params: UtilityParams) -> np.ndarray:
    """(H+1, 4) array of (front_x, front_y, rear_x, rear_y) centers."""
    direction = np.column_stack([np.cos(path.heading), np.sin(path.heading)])
    front = path.xy + params.circle_offset * direction
    rear = path.xy - params.circle_offset * direction
    return np.hstack([front, rear])


def pair_safety_penalty(circ_i: np.ndarray, circ_j: np.ndarray,
                        params: UtilityParams) -> float:
    """Unweighted sum over samples and circle pairs of min(D - d, 0)^2."""
    pen = 0.0
    for bi in (0, 2):
        for bj in (0, 2):
            dx = circ_i[:, bi] - circ_j[:, bj]
            dy = circ_i[:, bi + 1] - circ_j[:, bj + 1]
            dist = np.hypot(dx, dy)
            close = np.minimum(dist - params.d, 0.0)
            pen += float(np.sum(close**2))
    return pen


def safety_cost(paths: list[SampledPath], i: int,
                params: UtilityParams) -> float:
    circ = [circle_centers(p, params) for p in paths]
    pen = 0.0
    for j in range(len(paths)):
        if j != i:
            pen += pair_safety_penalty(circ[i], circ[j], params)
    return params.w_s * pen


def own_cost(path: SampledPath, params: UtilityParams) -> float:
    return (comfort_cost(path, params) + progress_cost(path, params)
            + reference_cost(path, params))


def segment_own_cost(seg: Segment, params: UtilityParams,
                     drop_first: bool = False) -> float:
    """Comfort + progress + reference sum of one segment's samples.

    The indices are per-sample sums, so chained segments add up exactly
    when each boundary's duplicate sample is dropped once.
    """
    lo = 1 if drop_first else 0
    a_lat = seg.a_lat[lo:]
    j_lat = seg.j_lat[lo:]
    a_long = seg.a_long[lo:]
    j_long = seg.j_long[lo:]
    lat = seg.l[lo:]
    slow = np.minimum(seg.v_long[lo:] - params.v_slow, 0.0)
    return float(
        params.w_a_lat * (a_lat @ a_lat)
        + params.w_j_lat * (j_lat @ j_lat)
        + params.w_a_long * (a_long @ a_long)
        + params.w_j_long * (j_long @ j_long)
        + params.w_p * (slow @ slow)
        + params.w_ref * (lat @ lat))


def utility(paths: list[SampledPath], params: UtilityParams) -> list[float]:
    """Per-player utility of one joint outcome: always <= 0."""
    return [-(own_cost(p, params) + safety_cost(paths, i, params))
            for i, p in enumerate(paths)]

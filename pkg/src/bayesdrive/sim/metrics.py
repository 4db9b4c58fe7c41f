"""Run statistics: accelerations of the ego, distances, collision rate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .harness import SimTrace


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsReport:
    runs: int
    avg_max_a_long: float
    rms_a_long: float
    avg_max_a_lat: float
    rms_a_lat: float
    avg_min_distance: float
    collisions: int
    collision_rate: float

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "runs": self.runs,
            "avg_max_a_long": self.avg_max_a_long,
            "rms_a_long": self.rms_a_long,
            "avg_max_a_lat": self.avg_max_a_lat,
            "rms_a_lat": self.rms_a_lat,
            "avg_min_distance": self.avg_min_distance,
            "collisions": self.collisions,
            "collision_rate": self.collision_rate,
        }

    CSV_HEADER = ("runs,avg_max_a_long,rms_a_long,avg_max_a_lat,rms_a_lat,"
                  "avg_min_distance,collision_rate")

    def csv_row(self) -> str:
        return ",".join(str(v) for v in (
            self.runs, self.avg_max_a_long, self.rms_a_long,
            self.avg_max_a_lat, self.rms_a_lat, self.avg_min_distance,
            self.collision_rate))


def executed_series(trace: SimTrace, player: int, key: str) -> np.ndarray:
    """Concatenated per-sample series of one vehicle across all steps,
    dropping each step's duplicated boundary sample."""
    parts = []
    for n, record in enumerate(trace.steps):
        vals = record.executed[player][key]
        parts.append(vals if n == 0 else vals[1:])
    if not parts:
        return np.zeros(0)
    return np.concatenate([np.asarray(p) for p in parts])


def compute_metrics(traces: list[SimTrace], ego: int = 0) -> MetricsReport:
    if not traces:
        raise MetricsError("no traces to summarize")
    max_long, rms_long, max_lat, rms_lat, min_dist = [], [], [], [], []
    collisions = 0
    for trace in traces:
        a_long = executed_series(trace, ego, "a_long")
        a_lat = executed_series(trace, ego, "a_lat")
        max_long.append(np.abs(a_long).max(initial=0.0))
        rms_long.append(float(np.sqrt(np.mean(a_long**2))) if len(a_long) else 0.0)
        max_lat.append(np.abs(a_lat).max(initial=0.0))
        rms_lat.append(float(np.sqrt(np.mean(a_lat**2))) if len(a_lat) else 0.0)
        min_dist.append(trace.min_circle_distance)
        collisions += bool(trace.collision)
    return MetricsReport(
        runs=len(traces),
        avg_max_a_long=float(np.mean(max_long)),
        rms_a_long=float(np.mean(rms_long)),
        avg_max_a_lat=float(np.mean(max_lat)),
        rms_a_lat=float(np.mean(rms_lat)),
        avg_min_distance=float(np.mean(min_dist)),
        collisions=collisions,
        collision_rate=collisions / len(traces))

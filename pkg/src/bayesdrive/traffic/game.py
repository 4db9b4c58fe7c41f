"""Assembly of the driving game from per-vehicle, per-type trajectory trees.

The flat game keeps the utility decomposed: each player's own comfort,
progress and reference cost is tabulated per (type, stage-1 action,
stage-2 action), while safety penalties are evaluated pairwise from
precomputed circle-center arrays.  This keeps the leaf table linear in
the per-player action count instead of exponential in the player count.
"""

from __future__ import annotations

import numpy as np

from ..solver.flat import FlatGame, TrafficUtility
from .costs import UtilityParams, segment_own_cost
from .trajectories import TrajectoryError, TrajectoryTree


def _segment_circles(seg, params: UtilityParams, drop_first: bool) -> np.ndarray:
    """(H, 4) front/rear circle centers of one segment's samples."""
    lo = 1 if drop_first else 0
    xy = seg.xy[lo:]
    heading = seg.heading[lo:]
    direction = np.column_stack([np.cos(heading), np.sin(heading)])
    front = xy + params.circle_offset * direction
    rear = xy - params.circle_offset * direction
    return np.hstack([front, rear])


def build_traffic_game(trees: list[list[TrajectoryTree]],
                       params: UtilityParams) -> FlatGame:
    """Flat two-stage game over ``trees[player][type]``.

    Stage-2 samples exclude the stage boundary so each instant is counted
    once along the joint horizon.
    """
    n = len(trees)
    if n < 1 or any(not per_type for per_type in trees):
        raise TrajectoryError("need at least one tree per vehicle")
    n_types = np.array([len(per_type) for per_type in trees], dtype=np.int32)
    t_max = int(n_types.max())
    a_max = max(tree.n_actions for per_type in trees for tree in per_type)
    h1 = len(trees[0][0].stage1[0].t)
    h2 = len(trees[0][0].stage2[0][0].t) - 1
    for per_type in trees:
        for tree in per_type:
            if any(len(seg.t) != h1 for seg in tree.stage1) or any(
                    len(seg.t) != h2 + 1 for row in tree.stage2 for seg in row):
                raise TrajectoryError("stage sample counts differ across trees")

    n_act = np.zeros((n, t_max, 2), dtype=np.int32)
    own = np.zeros((n, t_max, a_max, a_max))
    circles1 = np.zeros((n, t_max, a_max, h1, 4))
    circles2 = np.zeros((n, t_max, a_max, a_max, h2, 4))
    for i, per_type in enumerate(trees):
        for t, tree in enumerate(per_type):
            k = tree.n_actions
            n_act[i, t, :] = k
            for a1 in range(k):
                circles1[i, t, a1] = _segment_circles(
                    tree.stage1[a1], params, drop_first=False)
                cost1 = segment_own_cost(tree.stage1[a1], params)
                for a2 in range(k):
                    own[i, t, a1, a2] = cost1 + segment_own_cost(
                        tree.stage2[a1][a2], params, drop_first=True)
                    circles2[i, t, a1, a2] = _segment_circles(
                        tree.stage2[a1][a2], params, drop_first=True)

    utility = TrafficUtility(own=own, circles1=circles1, circles2=circles2,
                             w_s=params.w_s, d=params.d)
    return FlatGame(n_players=n, n_types=n_types, n_stages=2,
                    n_act=n_act, utility=utility)

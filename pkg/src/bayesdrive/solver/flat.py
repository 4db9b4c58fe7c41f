"""Flattened game representation consumed by the compiled kernel.

The compiled path requires uniform stage structure: the action count of a
(player, type) may differ across stages and types, but not across
histories within one stage.  Information sets then index densely as
mixed-radix numbers over the public joint action history, with digit
sizes given by the per-player, per-stage maximum action counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..games import GameSpec, InfoSet, Prior
from .tables import SolveResult


@dataclass
class TableUtility:
    """Dense per-leaf utilities: shape (n_typevecs, n_leaves, n_players)."""
    table: np.ndarray


@dataclass
class TrafficUtility:
    """Decomposed driving utilities.

    ``own[i]`` has shape (T_i, A1, A2): comfort + progress + reference
    cost of player i's own trajectory (padded with zeros).  ``circles1``
    has shape (N, Tmax, A1max, H1, 4) holding (fx, fy, rx, ry) circle
    centers of stage-1 samples; ``circles2`` shape
    (N, Tmax, A1max, A2max, H2, 4) for stage-2 samples (stage boundary
    sample excluded to avoid double counting).  The leaf utility is
    ``-own - w_s * sum_j pair_penalty(i, j)``.
    """
    own: np.ndarray        # (N, Tmax, A1max, A2max)
    circles1: np.ndarray   # (N, Tmax, A1max, H1, 4)
    circles2: np.ndarray   # (N, Tmax, A1max, A2max, H2, 4)
    w_s: float
    d: float


@dataclass
class FlatGame:
    n_players: int
    n_types: np.ndarray        # (N,) int32
    n_stages: int
    n_act: np.ndarray          # (N, Tmax, S) int32, 0-padded over types
    utility: TableUtility | TrafficUtility

    @property
    def a_max(self) -> np.ndarray:
        """Per (player, stage) digit sizes: max action count over types."""
        return self.n_act.max(axis=1).astype(np.int32)

    def stage_offsets(self) -> np.ndarray:
        """Infoset index offset per stage (same for every player/type)."""
        amax = self.a_max
        off = np.zeros(self.n_stages + 1, dtype=np.int64)
        hist = 1
        for stage in range(self.n_stages):
            off[stage + 1] = off[stage] + hist
            hist *= int(np.prod(amax[:, stage]))
        return off

    @property
    def n_isets(self) -> int:
        return int(self.stage_offsets()[-1])

    def leaf_index(self, z) -> int:
        amax = self.a_max
        idx = 0
        for stage in range(self.n_stages):
            for j in range(self.n_players):
                idx = idx * int(amax[j, stage]) + z[stage][j]
        return idx

    @property
    def n_leaves(self) -> int:
        return int(np.prod(self.a_max.astype(np.int64)))

    def decode_infoset(self, iset_index: int) -> InfoSet:
        off = self.stage_offsets()
        stage = int(np.searchsorted(off, iset_index, side="right")) - 1
        rem = iset_index - int(off[stage])
        amax = self.a_max
        hist: list[tuple[int, ...]] = []
        for m in reversed(range(stage)):
            joint = []
            for j in reversed(range(self.n_players)):
                joint.append(rem % int(amax[j, m]))
                rem //= int(amax[j, m])
            hist.append(tuple(reversed(joint)))
        return (stage, tuple(reversed(hist)))


def flatten_spec(spec: GameSpec, max_leaves: int = 2_000_000) -> FlatGame:
    """Build a dense-table flat game by exhaustive leaf enumeration.

    Intended for small verification games; traffic games construct their
    :class:`FlatGame` directly from trajectory tables.
    """
    n = spec.n_players
    t_max = max(spec.n_types)
    n_act = np.zeros((n, t_max, spec.n_stages), dtype=np.int32)
    for stage in range(spec.n_stages):
        hist0 = _first_history(spec, stage)
        for i in range(n):
            for t in range(spec.n_types[i]):
                n_act[i, t, stage] = spec.num_actions(i, t, (stage, hist0))
    game = FlatGame(n_players=n, n_types=np.asarray(spec.n_types, np.int32),
                    n_stages=spec.n_stages, n_act=n_act, utility=None)
    n_leaves = game.n_leaves
    if n_leaves > max_leaves:
        raise ValueError(f"game too large to tabulate ({n_leaves} leaves)")
    n_tv = int(np.prod(spec.n_types))
    table = np.zeros((n_tv, n_leaves, n), dtype=np.float64)
    for tv_idx, t in enumerate(spec.type_vectors()):
        for z in _terminal(spec, t):
            table[tv_idx, game.leaf_index(z)] = spec.terminal_utility(t, z)
    game.utility = TableUtility(table)
    return game


def _first_history(spec: GameSpec, stage: int):
    return tuple((0,) * spec.n_players for _ in range(stage))


def _terminal(spec: GameSpec, t):
    import itertools

    def rec(hist):
        stage = len(hist)
        if stage == spec.n_stages:
            yield tuple(hist)
            return
        ranges = [range(spec.num_actions(j, t[j], (stage, tuple(hist))))
                  for j in range(spec.n_players)]
        for joint in itertools.product(*ranges):
            yield from rec(hist + [joint])

    yield from rec([])


def flat_to_spec(game: FlatGame) -> GameSpec:
    """GameSpec view of a flat game (pure-Python backend path)."""
    n_types = tuple(int(t) for t in game.n_types)
    strides = [int(t) for t in game.n_types]

    def num_actions(player, type_id, iset):
        return int(game.n_act[player, type_id, iset[0]])

    if isinstance(game.utility, TableUtility):
        table = game.utility.table

        def utility(t, z):
            tv = 0
            for ti, n in zip(t, strides):
                tv = tv * n + ti
            return table[tv, game.leaf_index(z)]
    else:
        util = game.utility

        def utility(t, z):
            return traffic_leaf_utility(util, t, z[0], z[1])

    return GameSpec(n_players=game.n_players, n_types=n_types,
                    n_stages=game.n_stages, num_actions=num_actions,
                    utility=utility)


def traffic_leaf_utility(util: TrafficUtility, t, joint_a1, joint_a2):
    """Python mirror of the kernel's decomposed traffic utility."""
    n = util.own.shape[0]
    out = [-float(util.own[i, t[i], joint_a1[i], joint_a2[i]])
           for i in range(n)]
    d = util.d
    for i in range(n):
        for j in range(i + 1, n):
            pen = 0.0
            for circles, idx_i, idx_j in (
                (util.circles1, (i, t[i], joint_a1[i]),
                 (j, t[j], joint_a1[j])),
                (util.circles2, (i, t[i], joint_a1[i], joint_a2[i]),
                 (j, t[j], joint_a1[j], joint_a2[j])),
            ):
                ci = circles[idx_i]
                cj = circles[idx_j]
                for b_i in range(2):
                    for b_j in range(2):
                        dx = ci[:, 2 * b_i] - cj[:, 2 * b_j]
                        dy = ci[:, 2 * b_i + 1] - cj[:, 2 * b_j + 1]
                        dist = np.sqrt(dx * dx + dy * dy)
                        close = np.minimum(dist - d, 0.0)
                        pen += float(np.sum(close * close))
            out[i] -= util.w_s * pen
            out[j] -= util.w_s * pen
    return out


def run_compiled(game: FlatGame, prior: Prior, iterations: int, eps: float,
                 seed: int, decode_tables: bool = True) -> SolveResult:
    """Solve a flat game with the compiled kernel and decode the tables."""
    from . import _ckernel

    n = game.n_players
    n_types = np.asarray(game.n_types, dtype=np.int32)
    amax = game.a_max
    n_isets = game.n_isets
    amax_p = game.n_act.max(axis=(1, 2)).astype(np.int32)
    base = np.zeros(n, dtype=np.int64)
    vbase = np.zeros(n, dtype=np.int64)
    acc = accv = 0
    for i in range(n):
        base[i] = acc
        vbase[i] = accv
        acc += int(n_types[i]) * n_isets * int(amax_p[i])
        accv += int(n_types[i]) * n_isets
    re = np.zeros(acc, dtype=np.float64)
    sigma = np.zeros(acc, dtype=np.float64)
    visited = np.zeros(accv, dtype=np.uint8)
    # uniform initial strategies over each infoset's real action count
    for i in range(n):
        for t in range(int(n_types[i])):
            block = sigma[base[i] + t * n_isets * amax_p[i]:
                          base[i] + (t + 1) * n_isets * amax_p[i]]
            block = block.reshape(n_isets, amax_p[i])
            off = game.stage_offsets()
            for stage in range(game.n_stages):
                k = int(game.n_act[i, t, stage])
                block[int(off[stage]):int(off[stage + 1]), :k] = 1.0 / k
    va = np.zeros((n, int(n_types.max())), dtype=np.float64)
    counts = np.zeros((n, int(n_types.max())), dtype=np.int64)
    prior_flat = np.ascontiguousarray(prior.flat(), dtype=np.float64)

    util = game.utility
    if isinstance(util, TableUtility):
        args = (0, np.ascontiguousarray(util.table), None, None, None, 0.0, 0.0)
    else:
        args = (1, None,
                np.ascontiguousarray(util.own),
                np.ascontiguousarray(util.circles1),
                np.ascontiguousarray(util.circles2),
                float(util.w_s), float(util.d))

    n_slots = int(n_types.sum())
    amarg = np.zeros((n_slots, int(amax_p.max())), dtype=np.int64)

    import time
    start = time.perf_counter()
    freq = _ckernel.solve(
        n, game.n_stages, n_types,
        np.ascontiguousarray(game.n_act), np.ascontiguousarray(amax),
        np.ascontiguousarray(game.stage_offsets()),
        amax_p, base, vbase, prior_flat,
        re, sigma, visited, va, counts,
        int(iterations), float(eps), int(seed) & ((1 << 64) - 1),
        amarg, *args)
    duration = time.perf_counter() - start
    marginals = [{a: int(c) for a, c in enumerate(row) if c}
                 for row in amarg]

    # decode visited rows with plain integer arithmetic; the dense index
    # space is large and per-element numpy calls dominate otherwise
    import bisect

    off = [int(x) for x in game.stage_offsets()]
    amax_py = [[int(amax[j, s]) for j in range(n)]
               for s in range(game.n_stages)]
    iset_cache: dict[int, tuple] = {}

    def decode(idx: int):
        iset = iset_cache.get(idx)
        if iset is None:
            stage = bisect.bisect_right(off, idx) - 1
            rem = idx - off[stage]
            hist = []
            for m in reversed(range(stage)):
                joint = []
                for j in reversed(range(n)):
                    joint.append(rem % amax_py[m][j])
                    rem //= amax_py[m][j]
                hist.append(tuple(reversed(joint)))
            iset = (stage, tuple(reversed(hist)))
            iset_cache[idx] = iset
        return iset

    regrets: dict = {}
    strategies: dict = {}
    n_act_py = game.n_act.tolist()
    if decode_tables:
        for i in range(n):
            stride = int(amax_p[i])
            for t in range(int(n_types[i])):
                vblock = visited[vbase[i] + t * n_isets:
                                 vbase[i] + (t + 1) * n_isets]
                row0 = int(base[i]) + t * n_isets * stride
                for iset_idx in np.nonzero(vblock)[0]:
                    iset_idx = int(iset_idx)
                    iset = decode(iset_idx)
                    k = n_act_py[i][t][iset[0]]
                    row = row0 + iset_idx * stride
                    key = (i, t, iset)
                    regrets[key] = re[row:row + k].tolist()
                    strategies[key] = sigma[row:row + k].tolist()
    values = {}
    type_counts = {}
    for i in range(n):
        for t in range(int(n_types[i])):
            type_counts[(i, t)] = int(counts[i, t])
            if counts[i, t] > 0 or va[i, t] != 0.0:
                values[(i, t)] = float(va[i, t])
    return SolveResult(
        n_players=n, n_types=tuple(int(x) for x in n_types),
        iterations=iterations, regrets=regrets, strategies=strategies,
        values=values, type_counts=type_counts, freq=freq,
        full_plans=False, duration=duration, backend="compiled",
        _marginals=marginals,
    )

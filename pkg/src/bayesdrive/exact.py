"""Brute-force enumeration oracles for small games.

Everything here walks game trees exhaustively and is independent of the
sampling solver; the verification suites and tests compare solver output
against these values.
"""

from __future__ import annotations

import itertools

import numpy as np

from .games import GameSpec, History, InfoSet, Prior, TypeVector, enumerate_infosets
from .solver.tables import SolveResult


def _node_order(spec: GameSpec):
    for stage in range(spec.n_stages):
        for player in range(spec.n_players):
            yield stage, player


def exact_counterfactual_value(spec: GameSpec, t: TypeVector, player: int,
                               iset: InfoSet, sigma) -> float:
    """Counterfactual value of an infoset under a fixed type vector.

    ``sigma(player, type_id, iset, n_actions)`` returns the behavioral
    distribution.  Sums, over all terminal histories passing through the
    infoset, the rivals' reach to it times the full reach below it.
    """
    stage0, hist0 = iset
    total = 0.0
    for z in _terminal_histories_for(spec, t):
        if tuple(z[:stage0]) != hist0:
            continue
        before = 1.0
        after = 1.0
        for stage, j in _node_order(spec):
            node_iset = (stage, tuple(z[:stage]))
            k = spec.num_actions(j, t[j], node_iset)
            p = sigma(j, t[j], node_iset, k)[z[stage][j]]
            is_before = stage < stage0 or (stage == stage0 and j < player)
            if is_before:
                if j != player:
                    before *= p
            else:
                after *= p
        total += before * after * spec.terminal_utility(t, z)[player]
    return total


def _terminal_histories_for(spec: GameSpec, t: TypeVector):
    """Terminal histories reachable under the actual type vector."""

    def rec(hist):
        stage = len(hist)
        if stage == spec.n_stages:
            yield tuple(hist)
            return
        iset_hist = tuple(hist)
        ranges = [range(spec.num_actions(j, t[j], (stage, iset_hist)))
                  for j in range(spec.n_players)]
        for joint in itertools.product(*ranges):
            yield from rec(hist + [joint])

    yield from rec([])


def playout(spec: GameSpec, t: TypeVector, plans) -> History:
    """Deterministic history when every player follows its plan.

    ``plans[player]`` maps an infoset to an action for that player's
    realized type.
    """
    hist: list[tuple[int, ...]] = []
    for stage in range(spec.n_stages):
        iset = (stage, tuple(hist))
        hist.append(tuple(plans[j](iset) for j in range(spec.n_players)))
    return tuple(hist)


class PlanIndex:
    """Adapters from recorded plan keys to per-player plan callables."""

    def __init__(self, spec: GameSpec, full_plans: bool):
        self.spec = spec
        self.full_plans = full_plans
        self.slots = np.concatenate([[0], np.cumsum(spec.n_types)])
        if full_plans:
            self.positions = {}
            for i in range(spec.n_players):
                for ti in range(spec.n_types[i]):
                    isets = enumerate_infosets(spec, i, ti)
                    self.positions[(i, ti)] = {s: k for k, s in enumerate(isets)}

    def plan_fn(self, plan_key, player: int, type_id: int):
        slot = int(self.slots[player]) + type_id
        if not self.full_plans:
            action = plan_key[slot]
            return lambda iset: action
        actions = plan_key[slot]
        pos = self.positions[(player, type_id)]
        return lambda iset: actions[pos[iset]]

    def all_deviations(self, player: int, type_id: int):
        """Every pure plan of (player, type): iterables of plan callables."""
        spec = self.spec
        isets = enumerate_infosets(spec, player, type_id)
        ranges = [range(spec.num_actions(player, type_id, s)) for s in isets]
        pos = {s: k for k, s in enumerate(isets)}
        for assignment in itertools.product(*ranges):
            yield assignment, (lambda iset, a=assignment: a[pos[iset]])


def expected_type_value(spec: GameSpec, prior: Prior, result: SolveResult,
                        player: int, type_id: int) -> float:
    """V(t'_i): expected utility of a type under the recorded empirical
    plan distribution and the rivals' prior."""
    index = PlanIndex(spec, result.full_plans)
    others = [j for j in range(spec.n_players) if j != player]
    p_others = prior.conditional_others(player, type_id) \
        if not prior.is_product else None
    total = 0.0
    m = result.iterations
    for plan_key, count in result.freq.items():
        weight = count / m
        for t_others in itertools.product(
                *(range(spec.n_types[j]) for j in others)):
            t = _insert(t_others, others, player, type_id)
            pw = _prob_others(prior, p_others, others, t_others)
            plans = [index.plan_fn(plan_key, j, t[j])
                     for j in range(spec.n_players)]
            z = playout(spec, t, plans)
            total += weight * pw * spec.terminal_utility(t, z)[player]
    return total


def bayes_cce_regrets(spec: GameSpec, prior: Prior,
                      result: SolveResult) -> dict[tuple[int, int], float]:
    """Worst deviation gain per (player, type) against the empirical plan
    distribution: the quantity that must be small for a Bayes-CCE."""
    index = PlanIndex(spec, result.full_plans)
    out: dict[tuple[int, int], float] = {}
    m = result.iterations
    for player in range(spec.n_players):
        others = [j for j in range(spec.n_players) if j != player]
        for type_id in range(spec.n_types[player]):
            p_others = prior.conditional_others(player, type_id) \
                if not prior.is_product else None
            base = 0.0
            dev_values: dict[tuple, float] = {}
            for plan_key, count in result.freq.items():
                weight = count / m
                for t_others in itertools.product(
                        *(range(spec.n_types[j]) for j in others)):
                    t = _insert(t_others, others, player, type_id)
                    pw = weight * _prob_others(prior, p_others, others, t_others)
                    plans = [index.plan_fn(plan_key, j, t[j])
                             for j in range(spec.n_players)]
                    z = playout(spec, t, plans)
                    base += pw * spec.terminal_utility(t, z)[player]
                    for dev_id, dev_fn in index.all_deviations(player, type_id):
                        dev_plans = list(plans)
                        dev_plans[player] = dev_fn
                        zd = playout(spec, t, dev_plans)
                        dev_values[dev_id] = dev_values.get(dev_id, 0.0) + \
                            pw * spec.terminal_utility(t, zd)[player]
            out[(player, type_id)] = max(dev_values.values()) - base
    return out


def utility_range(spec: GameSpec, player: int) -> float:
    """Observed utility range of a player over all types and leaves."""
    lo, hi = float("inf"), float("-inf")
    for t in spec.type_vectors():
        for z in _terminal_histories_for(spec, t):
            u = spec.terminal_utility(t, z)[player]
            lo, hi = min(lo, u), max(hi, u)
    return hi - lo


def _insert(t_others, others, player, type_id) -> TypeVector:
    t = [0] * (len(others) + 1)
    t[player] = type_id
    for j, tj in zip(others, t_others):
        t[j] = tj
    return tuple(t)


def _prob_others(prior: Prior, p_others, others, t_others) -> float:
    if p_others is not None:
        return float(p_others[tuple(t_others)])
    w = 1.0
    for j, tj in zip(others, t_others):
        w *= float(prior.marginal(j)[tj])
    return w

"""Decision extraction from a solve: type values and plan selection."""

from __future__ import annotations

from dataclasses import dataclass

from .games import GameError
from .solver.tables import SolveResult


class PolicyError(ValueError):
    pass


@dataclass(frozen=True)
class TypeValueEstimate:
    player: int
    values: dict[int, float]   # type -> estimated expected utility
    counts: dict[int, int]


@dataclass(frozen=True)
class PlanChoice:
    player: int
    type_id: int
    action: int
    scheme: str  # "marginal" | "accurate"


def estimate_type_values(result: SolveResult, player: int) -> TypeValueEstimate:
    """Cumulative sampled counterfactual value at each type's root divided
    by that type's visit count."""
    values: dict[int, float] = {}
    counts: dict[int, int] = {}
    for t in range(result.n_types[player]):
        count = result.type_counts.get((player, t), 0)
        if count < 1:
            raise PolicyError(
                f"type {t} of player {player} was never sampled; "
                "raise the iteration count or adjust the prior")
        values[t] = result.values.get((player, t), 0.0) / count
        counts[t] = count
    return TypeValueEstimate(player=player, values=values, counts=counts)


def select_type(est: TypeValueEstimate,
                allowed: list[int] | None = None) -> int:
    """Argmax over estimated type values; ties go to the lowest index.

    ``allowed`` restricts the choice (e.g. the ego's navigation goal is
    fixed and only matching types are selectable).
    """
    pool = sorted(est.values) if allowed is None else sorted(allowed)
    if not pool:
        raise PolicyError("empty type pool")
    best = pool[0]
    for t in pool[1:]:
        if est.values[t] > est.values[best]:
            best = t
    return best


def _plan_slot(result: SolveResult, player: int) -> int:
    return sum(result.n_types[:player])


def _component(result: SolveResult, plan_key, player: int):
    """Player's slice of a recorded plan key (one entry per type)."""
    slot = _plan_slot(result, player)
    return tuple(plan_key[slot:slot + result.n_types[player]])


def marginal_plan(result: SolveResult, player: int, type_id: int) -> int:
    """Mode of the empirical marginal over this (player, type)'s
    first-stage action; ties go to the lowest action index."""
    if not result.freq:
        raise PolicyError("empty plan frequency table")
    marg = result.plan_marginal(player, type_id)
    best = min(a for a in marg)
    for a in sorted(marg):
        if marg[a] > marg[best]:
            best = a
    return best


def accurate_plans(result: SolveResult,
                   order: list[int]) -> dict[int, tuple]:
    """Leader-follower maximum-likelihood decomposition of the joint
    empirical plan distribution.

    Returns each player's full plan component (one action per type).
    Raises when a follower's conditioning event has zero recorded mass.
    """
    if sorted(order) != list(range(result.n_players)):
        raise PolicyError("order must be a permutation of the players")
    if not result.freq:
        raise PolicyError("empty plan frequency table")
    chosen: dict[int, tuple] = {}
    for player in order:
        weights: dict[tuple, int] = {}
        for plan_key, count in result.freq.items():
            if any(_component(result, plan_key, q) != chosen[q]
                   for q in chosen):
                continue
            comp = _component(result, plan_key, player)
            weights[comp] = weights.get(comp, 0) + count
        if not weights:
            raise PolicyError(
                f"no recorded plans match the leaders' choices at player "
                f"{player}")
        best = min(weights)
        for comp in sorted(weights):
            if weights[comp] > weights[best]:
                best = comp
        chosen[player] = best
    return chosen


def choose_plan(result: SolveResult, player: int, type_id: int,
                scheme: str = "marginal",
                order: list[int] | None = None) -> PlanChoice:
    if scheme == "marginal":
        action = marginal_plan(result, player, type_id)
    elif scheme == "accurate":
        if order is None:
            order = list(range(result.n_players))
        try:
            comps = accurate_plans(result, order)
            action = comps[player][type_id]
        except PolicyError:
            # zero-mass conditioning event: fall back to the marginal
            action = marginal_plan(result, player, type_id)
    else:
        raise GameError(f"unknown plan scheme {scheme!r}")
    return PlanChoice(player=player, type_id=type_id, action=action,
                      scheme=scheme)

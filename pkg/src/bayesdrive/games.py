"""Staged games of incomplete information.

A game has a chance stage that draws one type per player from a common
prior, followed by ``n_stages`` rounds of simultaneous moves.  Information
sets are keyed structurally by ``(stage, history)`` where ``history`` is the
tuple of completed-stage joint action index vectors; same-stage moves of
other players are never part of the key, which encodes simultaneity.
Action indices are public, the type that produced them is not.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

# An information set is (stage, history); history is a tuple of per-stage
# joint action tuples.  The root of every player/type is (0, ()).
InfoSet = tuple[int, tuple[tuple[int, ...], ...]]
TypeVector = tuple[int, ...]
History = tuple[tuple[int, ...], ...]

ROOT: InfoSet = (0, ())


class GameError(ValueError):
    pass


class Prior:
    """Common distribution over type vectors.

    Either a joint table over the full type space or a product of
    per-player categorical marginals.  Marginal-implementation paths
    require the product form.
    """

    def __init__(self, joint: np.ndarray | None = None,
                 marginals: Sequence[Sequence[float]] | None = None):
        if (joint is None) == (marginals is None):
            raise GameError("give exactly one of joint or marginals")
        if joint is not None:
            joint = np.asarray(joint, dtype=float)
            if np.any(joint < 0) or abs(joint.sum() - 1.0) > 1e-9:
                raise GameError("joint prior must be a probability table")
            self._joint = joint
            self._marginals = None
        else:
            ms = []
            for m in marginals:
                m = np.asarray(m, dtype=float)
                if np.any(m < 0) or abs(m.sum() - 1.0) > 1e-9:
                    raise GameError("marginal prior must be a distribution")
                ms.append(m)
            self._joint = None
            self._marginals = ms

    @property
    def is_product(self) -> bool:
        return self._marginals is not None

    @property
    def n_types(self) -> tuple[int, ...]:
        if self._joint is not None:
            return self._joint.shape
        return tuple(len(m) for m in self._marginals)

    def joint_table(self) -> np.ndarray:
        if self._joint is not None:
            return self._joint
        table = self._marginals[0]
        for m in self._marginals[1:]:
            table = np.multiply.outer(table, m)
        return table

    def flat(self) -> np.ndarray:
        """Joint probabilities flattened player-major (C order)."""
        return np.ascontiguousarray(self.joint_table().ravel())

    def marginal(self, player: int) -> np.ndarray:
        if self._marginals is not None:
            return np.asarray(self._marginals[player])
        axes = tuple(a for a in range(self._joint.ndim) if a != player)
        return self._joint.sum(axis=axes)

    def conditional_others(self, player: int, t_i: int) -> np.ndarray:
        """p(t_{-i} | t_i) as a table over the other players' type axes."""
        joint = self.joint_table()
        sub = np.take(joint, t_i, axis=player)
        total = sub.sum()
        if total <= 0:
            raise GameError(f"type {t_i} of player {player} has zero prior mass")
        return sub / total


@dataclass(frozen=True)
class GameSpec:
    """Declarative staged incomplete-information game.

    ``num_actions(player, type, infoset)`` gives the size of the ordered
    action list; ``utility(type_vector, terminal_history)`` gives the
    per-player payoff and must be a pure function.
    """

    n_players: int
    n_types: tuple[int, ...]
    n_stages: int
    num_actions: Callable[[int, int, InfoSet], int]
    utility: Callable[[TypeVector, History], Sequence[float]]
    utility_ranges: tuple[float, ...] | None = None
    # set when every type of a player has the same action count at each
    # stage-equivalent infoset; enables the compiled kernel
    label: str = ""

    def __post_init__(self):
        if len(self.n_types) != self.n_players:
            raise GameError("n_types must have one entry per player")
        if self.n_stages < 1 or any(t < 1 for t in self.n_types):
            raise GameError("need at least one stage and one type per player")

    def type_vectors(self):
        return itertools.product(*(range(t) for t in self.n_types))

    def terminal_utility(self, t: TypeVector, z: History) -> list[float]:
        if len(z) != self.n_stages:
            raise GameError(
                f"history has {len(z)} stages, game has {self.n_stages}")
        u = list(self.utility(t, z))
        if len(u) != self.n_players:
            raise GameError("utility provider returned wrong player count")
        return u

    def max_actions(self, player: int, stage: int, history: History) -> int:
        """Largest action count over the player's types at this infoset."""
        iset = (stage, history)
        return max(self.num_actions(player, t, iset)
                   for t in range(self.n_types[player]))

    def joint_histories(self, stage: int):
        """All reachable completed-stage histories at the start of `stage`."""
        if stage == 0:
            yield ()
            return
        for h in self.joint_histories(stage - 1):
            ranges = [range(self.max_actions(j, stage - 1, h))
                      for j in range(self.n_players)]
            for joint in itertools.product(*ranges):
                yield h + (joint,)

    def terminal_histories(self):
        yield from self.joint_histories(self.n_stages)


def enumerate_infosets(spec: GameSpec, player: int, type_id: int) -> list[InfoSet]:
    """All infosets of (player, type) in stage-then-history order.

    Reachability is over any joint play of any rival type assignment, so
    observed action indices range over the per-player maxima.
    """
    if not 0 <= player < spec.n_players:
        raise GameError(f"no player {player}")
    if not 0 <= type_id < spec.n_types[player]:
        raise GameError(f"player {player} has no type {type_id}")
    out: list[InfoSet] = []
    for stage in range(spec.n_stages):
        for h in spec.joint_histories(stage):
            out.append((stage, h))
    return out


def matrix_game(payoffs: np.ndarray) -> GameSpec:
    """One-stage complete-information game from a payoff tensor.

    ``payoffs`` has shape (n_act_0, ..., n_act_{N-1}, N).
    """
    payoffs = np.asarray(payoffs, dtype=float)
    n_players = payoffs.ndim - 1
    shape = payoffs.shape[:-1]

    def num_actions(player, _t, _iset):
        return shape[player]

    def utility(_t, z):
        return payoffs[z[0]]

    return GameSpec(n_players=n_players, n_types=(1,) * n_players,
                    n_stages=1, num_actions=num_actions, utility=utility)


@dataclass
class BayesianMatrixGame:
    """One-stage incomplete-information game with per-type payoff tables.

    ``payoffs[t]`` maps a type vector to a tensor of shape
    (n_act(0, t_0), ..., n_act(N-1, t_{N-1}), N).
    """

    n_actions: list[list[int]]  # per player, per type
    payoffs: dict[TypeVector, np.ndarray]
    _spec: GameSpec = field(init=False, repr=False)

    def __post_init__(self):
        n_players = len(self.n_actions)
        n_types = tuple(len(a) for a in self.n_actions)
        tables = {t: np.asarray(v, dtype=float) for t, v in self.payoffs.items()}

        def num_actions(player, type_id, _iset):
            return self.n_actions[player][type_id]

        def utility(t, z):
            return tables[tuple(t)][z[0]]

        self._spec = GameSpec(n_players=n_players, n_types=n_types,
                              n_stages=1, num_actions=num_actions,
                              utility=utility)

    @property
    def spec(self) -> GameSpec:
        return self._spec

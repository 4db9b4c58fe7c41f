"""Bayesian intention updates with Mixture-of-Gaussians likelihoods."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np


class BeliefError(ValueError):
    pass


@dataclass(frozen=True)
class ObservationModel:
    """Gaussian observation model over end states.

    ``mu`` maps an executed action / candidate plan object to its end
    state (a small vector, by default planar position in meters).
    """

    sigma: np.ndarray
    mu: Callable[[object], np.ndarray]

    def __post_init__(self):
        sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))
        if sigma.shape[0] != sigma.shape[1]:
            raise BeliefError("covariance must be square")
        if not np.allclose(sigma, sigma.T):
            raise BeliefError("covariance must be symmetric")
        try:
            chol = np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError as exc:
            raise BeliefError("covariance must be positive definite") from exc
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "_chol", chol)
        k = sigma.shape[0]
        logdet = 2.0 * float(np.sum(np.log(np.diag(chol))))
        object.__setattr__(self, "_lognorm",
                           -0.5 * (k * math.log(2.0 * math.pi) + logdet))

    def log_density(self, offset: np.ndarray) -> float:
        z = np.linalg.solve(self._chol, np.asarray(offset, dtype=float))
        return self._lognorm - 0.5 * float(z @ z)

    def density(self, offset: np.ndarray) -> float:
        return math.exp(self.log_density(offset))


@dataclass(frozen=True)
class Belief:
    """Per-player categorical distributions over types (product form)."""

    marginals: tuple[tuple[float, ...], ...]

    @classmethod
    def uniform(cls, n_types: Sequence[int]) -> "Belief":
        return cls(tuple(tuple(1.0 / n for _ in range(n)) for n in n_types))

    def __post_init__(self):
        for m in self.marginals:
            if any(p < 0 for p in m) or abs(sum(m) - 1.0) > 1e-9:
                raise BeliefError("marginals must be distributions")

    def of(self, player: int) -> tuple[float, ...]:
        return self.marginals[player]

    def replace(self, player: int, dist: Sequence[float]) -> "Belief":
        ms = list(self.marginals)
        ms[player] = tuple(float(p) for p in dist)
        return Belief(tuple(ms))


Candidates = Iterable[tuple[object, float]]


def log_likelihood_marginal(observed: object, candidates: Candidates,
                            model: ObservationModel) -> float:
    """log f_i: Gaussian mixture over the recorded plan distribution,
    evaluated at the observed end state.  Computed in log space to stay
    finite over long horizons."""
    obs = model.mu(observed)
    logs = []
    for candidate, weight in candidates:
        if weight <= 0.0:
            continue
        logs.append(math.log(weight) +
                    model.log_density(obs - model.mu(candidate)))
    if not logs:
        return float("-inf")
    top = max(logs)
    return top + math.log(sum(math.exp(v - top) for v in logs))


def likelihood_marginal(observed: object, candidates: Candidates,
                        model: ObservationModel) -> float:
    return math.exp(log_likelihood_marginal(observed, candidates, model))


def update_marginal(belief: Belief, player: int, observed: object,
                    candidates_per_type: Sequence[Candidates],
                    model: ObservationModel) -> Belief:
    """Posterior over one player's types; other marginals untouched."""
    prior = belief.of(player)
    if len(candidates_per_type) != len(prior):
        raise BeliefError("need one candidate mixture per type")
    logpost = []
    for p, cands in zip(prior, candidates_per_type):
        if p <= 0.0:
            logpost.append(float("-inf"))
        else:
            logpost.append(math.log(p) +
                           log_likelihood_marginal(observed, cands, model))
    top = max(logpost)
    if top == float("-inf"):
        raise BeliefError(
            f"observation inconsistent with all types of player {player}")
    weights = [math.exp(v - top) for v in logpost]
    total = sum(weights)
    return belief.replace(player, [w / total for w in weights])


def update_joint(joint: np.ndarray, observed: Sequence[object],
                 candidates_for,
                 model: ObservationModel) -> np.ndarray:
    """Posterior over full type vectors.

    ``candidates_for(t)`` yields ``(per_player_candidates, weight)``
    pairs for type vector ``t``; the joint end state is the concatenation
    of per-player end states, so with a block-diagonal covariance the
    joint density is the product of per-player densities.
    """
    joint = np.asarray(joint, dtype=float)
    logpost = np.full(joint.shape, -np.inf)
    for t in np.ndindex(joint.shape):
        if joint[t] <= 0.0:
            continue
        logs = []
        for per_player, weight in candidates_for(t):
            if weight <= 0.0:
                continue
            total = math.log(weight)
            for obs_i, cand_i in zip(observed, per_player):
                total += model.log_density(model.mu(obs_i) - model.mu(cand_i))
            logs.append(total)
        if logs:
            top = max(logs)
            mix = top + math.log(sum(math.exp(v - top) for v in logs))
            logpost[t] = math.log(joint[t]) + mix
    top = logpost.max()
    if top == -np.inf:
        raise BeliefError("observation inconsistent with all type vectors")
    post = np.exp(logpost - top)
    return post / post.sum()

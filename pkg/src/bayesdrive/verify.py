"""Small-game verification suites backed by brute-force oracles.

Each check runs the sampling solver on a game small enough to enumerate
exhaustively and compares against :mod:`bayesdrive.exact`.  The CLI
``verify`` command and the acceptance tests both consume these.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .exact import (bayes_cce_regrets, exact_counterfactual_value,
                    expected_type_value, utility_range)
from .games import ROOT, BayesianMatrixGame, GameSpec, Prior, matrix_game
from .policy import PolicyError, estimate_type_values
from .solver import SolverConfig, solve


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    skipped: bool = False

    def line(self) -> str:
        tag = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return f"[{tag}] {self.name}: {self.detail} ({self.seconds:.1f}s)"


def tiny_bayesian_game(seed: int = 0) -> tuple[GameSpec, Prior]:
    """2 players x 2 types, one stage, 2-3 actions, utilities in [-1, 0]."""
    rng = np.random.default_rng(seed)
    n_actions = [[2, 3], [3, 2]]
    payoffs = {}
    for t0 in range(2):
        for t1 in range(2):
            shape = (n_actions[0][t0], n_actions[1][t1], 2)
            payoffs[(t0, t1)] = rng.uniform(-1.0, 0.0, size=shape)
    spec = BayesianMatrixGame(n_actions=n_actions, payoffs=payoffs).spec
    prior = Prior(marginals=[[0.6, 0.4], [0.3, 0.7]])
    return spec, prior


def matching_pennies_game() -> tuple[GameSpec, Prior]:
    payoffs = np.zeros((2, 2, 2))
    for a in range(2):
        for b in range(2):
            payoffs[a, b, 0] = 1.0 if a == b else -1.0
            payoffs[a, b, 1] = -payoffs[a, b, 0]
    return matrix_game(payoffs), Prior(marginals=[[1.0], [1.0]])


def two_stage_game() -> tuple[GameSpec, Prior]:
    """Fixed 2-player, 2-stage, 2-action complete-information game."""
    rng = np.random.default_rng(7)
    table = rng.uniform(-1.0, 0.0, size=(2, 2, 2, 2, 2))

    def num_actions(_p, _t, _iset):
        return 2

    def utility(_t, z):
        (a0, b0), (a1, b1) = z
        return table[a0, b0, a1, b1]

    spec = GameSpec(n_players=2, n_types=(1, 1), n_stages=2,
                    num_actions=num_actions, utility=utility)
    return spec, Prior(marginals=[[1.0], [1.0]])


def _max_relative_regret(spec: GameSpec, prior: Prior, result) -> float:
    regs = bayes_cce_regrets(spec, prior, result)
    worst = 0.0
    for (player, _t), gain in regs.items():
        worst = max(worst, gain / utility_range(spec, player))
    return worst


def check_bayes_cce_convergence(iterations: int = 100_000,
                                seeds: range = range(5),
                                tol: float = 0.05) -> CheckResult:
    """Worst Bayes-CCE deviation gain over plans, players and types."""
    start = time.perf_counter()
    spec, prior = tiny_bayesian_game()
    worst = 0.0
    for seed in seeds:
        result = solve(spec, prior, SolverConfig(iterations=iterations,
                                                 seed=seed))
        worst = max(worst, _max_relative_regret(spec, prior, result))
    return CheckResult(
        name="bayes_cce_convergence", passed=worst <= tol,
        detail=f"max regret {worst:.4f} of utility range (tol {tol})",
        seconds=time.perf_counter() - start)


def check_regret_decay(budgets=(1_000, 10_000, 100_000),
                       tol: float = 0.05) -> CheckResult:
    """Regret trend over increasing iteration budgets on the tiny game."""
    start = time.perf_counter()
    spec, prior = tiny_bayesian_game()
    series = []
    for m in budgets:
        result = solve(spec, prior, SolverConfig(iterations=m, seed=0))
        series.append(_max_relative_regret(spec, prior, result))
    decayed = series[-1] <= series[0] and series[-1] <= tol
    return CheckResult(
        name="regret_decay", passed=decayed,
        detail="regrets " + " -> ".join(f"{v:.4f}" for v in series),
        seconds=time.perf_counter() - start)


def check_matching_pennies(iterations: int = 50_000,
                           tol: float = 0.05) -> CheckResult:
    """Mixed-equilibrium recovery and exploitability on matching pennies."""
    start = time.perf_counter()
    spec, prior = matching_pennies_game()
    result = solve(spec, prior, SolverConfig(iterations=iterations, seed=0))
    worst_marg = 0.0
    for player in range(2):
        marg = result.plan_marginal(player, 0)
        for a in range(2):
            worst_marg = max(worst_marg, abs(marg.get(a, 0.0) - 0.5))
    regs = bayes_cce_regrets(spec, prior, result)
    exploit = max(gain / utility_range(spec, p)
                  for (p, _t), gain in regs.items())
    ok = worst_marg <= tol and exploit <= tol
    return CheckResult(
        name="matching_pennies", passed=ok,
        detail=(f"marginal offset {worst_marg:.4f}, "
                f"exploitability {exploit:.4f} of utility range"),
        seconds=time.perf_counter() - start)


def check_estimator_consistency(budgets=(1_000, 10_000, 100_000),
                                seeds: range = range(20),
                                tol: float = 0.02) -> CheckResult:
    """Mean |estimated - exact| type value, decreasing in iterations."""
    start = time.perf_counter()
    if min(budgets) < 100:
        return CheckResult(
            name="estimator_consistency", passed=True, skipped=True,
            detail=f"insufficient iterations (min budget {min(budgets)})",
            seconds=time.perf_counter() - start)
    spec, prior = tiny_bayesian_game()
    means = []
    try:
        for m in budgets:
            errs = []
            for seed in seeds:
                result = solve(spec, prior,
                               SolverConfig(iterations=m, seed=seed))
                for player in range(spec.n_players):
                    est = estimate_type_values(result, player)
                    for t in range(spec.n_types[player]):
                        exact = expected_type_value(spec, prior, result,
                                                    player, t)
                        errs.append(abs(est.values[t] - exact)
                                    / utility_range(spec, player))
            means.append(float(np.mean(errs)))
    except PolicyError as exc:
        return CheckResult(
            name="estimator_consistency", passed=True, skipped=True,
            detail=f"insufficient iterations ({exc})",
            seconds=time.perf_counter() - start)
    decreasing = all(means[k + 1] < means[k] for k in range(len(means) - 1))
    ok = decreasing and means[-1] <= tol
    return CheckResult(
        name="estimator_consistency", passed=ok,
        detail="mean errors " + " -> ".join(f"{v:.4f}" for v in means),
        seconds=time.perf_counter() - start)


def _sample_leaf(spec: GameSpec, sigma, eps: float, rng):
    """One outcome sample under the eps-mixed strategy.

    Returns the leaf, its sampling likelihood, the per-node rival-prefix
    reach products and the tail products from each node on (inclusive).
    """
    t = tuple(0 for _ in range(spec.n_players))
    hist: list[tuple[int, ...]] = []
    nodes = []  # (player, stage, prob under sigma, prefix of others)
    like = 1.0
    reach = [1.0] * spec.n_players
    for stage in range(spec.n_stages):
        joint = []
        for i in range(spec.n_players):
            iset = (stage, tuple(hist))
            k = spec.num_actions(i, t[i], iset)
            dist = sigma(i, t[i], iset, k)
            mixed = [(1.0 - eps) * p + eps / k for p in dist]
            a = int(rng.choice(k, p=np.asarray(mixed) / sum(mixed)))
            like *= mixed[a]
            prefix = 1.0
            for j in range(spec.n_players):
                if j != i:
                    prefix *= reach[j]
            nodes.append((i, stage, dist[a], prefix))
            reach[i] *= dist[a]
            joint.append(a)
        hist.append(tuple(joint))
    z = tuple(hist)
    u = spec.terminal_utility(t, z)
    # tail products: prob of all actions from each node on (inclusive)
    tails = [0.0] * len(nodes)
    x = 1.0
    for idx in range(len(nodes) - 1, -1, -1):
        x *= nodes[idx][2]
        tails[idx] = x
    return z, like, nodes, tails, u


def check_unbiasedness(samples: int = 100_000, eps: float = 0.6,
                       tol: float = 0.01, seed: int = 0) -> CheckResult:
    """Sampled counterfactual root values average to the exact ones."""
    start = time.perf_counter()
    spec, _prior = two_stage_game()
    rng = np.random.default_rng(seed)

    # a fixed, seeded, non-degenerate behavioral strategy
    dist_rng = np.random.default_rng(12345)
    dists: dict = {}

    def sigma(player, type_id, iset, k):
        key = (player, type_id, iset)
        if key not in dists:
            raw = dist_rng.uniform(0.2, 1.0, size=k)
            dists[key] = list(raw / raw.sum())
        return dists[key]

    t = (0, 0)
    exact = [exact_counterfactual_value(spec, t, i, ROOT, sigma)
             for i in range(spec.n_players)]
    acc = np.zeros(spec.n_players)
    for _ in range(samples):
        _z, like, nodes, tails, u = _sample_leaf(spec, sigma, eps, rng)
        for idx, (i, stage, _p, prefix) in enumerate(nodes):
            if stage == 0:
                acc[i] += u[i] / like * prefix * tails[idx]
    worst = 0.0
    for i in range(spec.n_players):
        err = abs(acc[i] / samples - exact[i]) / utility_range(spec, i)
        worst = max(worst, err)
    return CheckResult(
        name="unbiasedness", passed=worst <= tol,
        detail=f"max error {worst:.4f} of utility range (tol {tol})",
        seconds=time.perf_counter() - start)


def run_all(scale: float = 1.0) -> list[CheckResult]:
    """All suites; ``scale`` shrinks iteration budgets for smoke runs."""

    def n(x):
        return max(1, int(x * scale))

    return [
        check_bayes_cce_convergence(iterations=n(100_000)),
        check_regret_decay(budgets=(n(1_000), n(10_000), n(100_000))),
        check_matching_pennies(iterations=n(50_000)),
        check_estimator_consistency(
            budgets=(n(1_000), n(10_000), n(100_000))),
        check_unbiasedness(samples=n(100_000)),
    ]

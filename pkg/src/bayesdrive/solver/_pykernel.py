"""Pure-Python MCCFR-S backend.

Reference implementation over arbitrary :class:`GameSpec` providers; the
compiled kernel mirrors this logic exactly (same RNG consumption order,
same floating-point operation order) for games with uniform stage
structure.  Plain floats and lists are used instead of numpy on purpose:
they reproduce the C double arithmetic of the compiled path bit for bit.
"""

from __future__ import annotations

import time

from ..games import ROOT, GameSpec, InfoSet, Prior, enumerate_infosets
from ..rng import Pcg32
from .tables import SolveResult


def regret_match(regrets: list[float]) -> list[float]:
    """Positive-part normalization; uniform when nothing is positive."""
    k = len(regrets)
    total = 0.0
    for r in regrets:
        if r > 0.0:
            total += r
    if total <= 0.0:
        return [1.0 / k] * k
    return [(r / total if r > 0.0 else 0.0) for r in regrets]


class PySolver:
    def __init__(self, spec: GameSpec, prior: Prior):
        if prior.n_types != spec.n_types:
            raise ValueError("prior support does not match the game's types")
        self.spec = spec
        self.prior_flat = [float(p) for p in prior.flat()]
        self.regrets: dict[tuple[int, int, InfoSet], list[float]] = {}
        self.strategies: dict[tuple[int, int, InfoSet], list[float]] = {}
        self.values: dict[tuple[int, int], float] = {}
        self.type_counts: dict[tuple[int, int], int] = {
            (i, t): 0
            for i in range(spec.n_players) for t in range(spec.n_types[i])
        }
        self._infoset_cache: dict[tuple[int, int], list[InfoSet]] = {}

    # -- helpers -------------------------------------------------------

    def _sigma(self, player: int, type_id: int, iset: InfoSet,
               k: int) -> list[float]:
        got = self.strategies.get((player, type_id, iset))
        if got is None:
            return [1.0 / k] * k
        return got

    def _sample_type_vector(self, rng: Pcg32) -> tuple[int, ...]:
        idx = rng.choice(self.prior_flat)
        t = []
        for n in reversed(self.spec.n_types):
            t.append(idx % n)
            idx //= n
        return tuple(reversed(t))

    # -- one outcome-sampling episode ---------------------------------

    def episode(self, t: tuple[int, ...], eps: float, rng: Pcg32,
                root_values_only: bool = True):
        """Forward-sample one leaf, then update regrets, strategies and
        cumulative sampled counterfactual values along the path."""
        spec = self.spec
        n = spec.n_players
        reach = [1.0] * n
        like = 1.0
        hist: list[tuple[int, ...]] = []
        nodes = []  # (player, iset, k, action, sigma, prefix_others)
        for stage in range(spec.n_stages):
            h = tuple(hist)
            joint = []
            for i in range(n):
                iset = (stage, h)
                k = spec.num_actions(i, t[i], iset)
                sigma = self._sigma(i, t[i], iset, k)
                prefix_others = 1.0
                for j in range(n):
                    if j != i:
                        prefix_others *= reach[j]
                mixed = [(1.0 - eps) * sigma[a] + eps / k for a in range(k)]
                a = rng.choice(mixed)
                like *= mixed[a]
                reach[i] *= sigma[a]
                nodes.append((i, iset, k, a, sigma, prefix_others))
                joint.append(a)
            hist.append(tuple(joint))
        z = tuple(hist)
        util = spec.terminal_utility(t, z)

        x = 1.0
        for i, iset, k, a, sigma, prefix_others in reversed(nodes):
            c = x
            x = c * sigma[a]
            w = util[i] / like * prefix_others
            key = (i, t[i], iset)
            regs = self.regrets.get(key)
            if regs is None:
                regs = [0.0] * k
                self.regrets[key] = regs
            for ap in range(k):
                if ap == a:
                    regs[ap] += (c - x) * w
                else:
                    regs[ap] += (-x) * w
            self.strategies[key] = regret_match(regs)
            if iset[0] == 0 or not root_values_only:
                vkey = (i, t[i])
                self.values[vkey] = self.values.get(vkey, 0.0) + x * w
        return z, util

    # -- plan sampling -------------------------------------------------

    def sample_partial_plan(self, rng: Pcg32) -> tuple[int, ...]:
        spec = self.spec
        plan = []
        for i in range(spec.n_players):
            for t in range(spec.n_types[i]):
                k = spec.num_actions(i, t, ROOT)
                sigma = self._sigma(i, t, ROOT, k)
                plan.append(rng.choice(sigma))
        return tuple(plan)

    def sample_full_plan(self, rng: Pcg32) -> tuple:
        """Per (player, type): an action for every infoset, in
        stage-then-history order."""
        spec = self.spec
        plan = []
        for i in range(spec.n_players):
            for t in range(spec.n_types[i]):
                key = (i, t)
                isets = self._infoset_cache.get(key)
                if isets is None:
                    isets = enumerate_infosets(spec, i, t)
                    self._infoset_cache[key] = isets
                actions = []
                for iset in isets:
                    k = spec.num_actions(i, t, iset)
                    sigma = self._sigma(i, t, iset, k)
                    actions.append(rng.choice(sigma))
                plan.append(tuple(actions))
        return tuple(plan)


def solve_python(spec: GameSpec, prior: Prior, iterations: int, eps: float,
                 seed: int, *, record_full_plans: bool = False,
                 record_samples: bool = False,
                 root_values_only: bool = True) -> SolveResult:
    solver = PySolver(spec, prior)
    rng = Pcg32(seed)
    freq: dict[tuple, int] = {}
    samples = [] if record_samples else None
    start = time.perf_counter()
    for _ in range(iterations):
        t = solver._sample_type_vector(rng)
        for i, ti in enumerate(t):
            solver.type_counts[(i, ti)] += 1
        solver.episode(t, eps, rng, root_values_only=root_values_only)
        if record_full_plans:
            plan = solver.sample_full_plan(rng)
        else:
            plan = solver.sample_partial_plan(rng)
        freq[plan] = freq.get(plan, 0) + 1
        if samples is not None:
            samples.append((t, plan))
    duration = time.perf_counter() - start
    return SolveResult(
        n_players=spec.n_players, n_types=spec.n_types,
        iterations=iterations, regrets=solver.regrets,
        strategies=solver.strategies, values=solver.values,
        type_counts=solver.type_counts, freq=freq,
        full_plans=record_full_plans, duration=duration,
        backend="python", samples=samples,
    )

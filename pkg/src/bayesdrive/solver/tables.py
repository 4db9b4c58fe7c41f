"""Solver output tables and their canonical serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from ..games import InfoSet, TypeVector

SCHEMA_VERSION = 1

# A partial plan: per (player, type) in player-major order, the stage-1
# action index.  A full plan additionally carries per-infoset actions and
# is keyed by a nested tuple.
PlanKey = tuple


@dataclass
class SolveResult:
    """All tables produced by one solve.

    ``regrets`` and ``strategies`` hold only visited infosets; unvisited
    infosets implicitly carry zero regret and a uniform strategy.
    ``values`` holds the cumulative sampled counterfactual value at each
    (player, type) root; ``type_counts`` the number of iterations whose
    sampled type vector matched.
    """

    n_players: int
    n_types: tuple[int, ...]
    iterations: int
    regrets: dict[tuple[int, int, InfoSet], list[float]]
    strategies: dict[tuple[int, int, InfoSet], list[float]]
    values: dict[tuple[int, int], float]
    type_counts: dict[tuple[int, int], int]
    freq: dict[PlanKey, int]
    full_plans: bool = False
    duration: float = 0.0
    backend: str = "python"
    samples: list[tuple[TypeVector, PlanKey]] | None = None
    _marginals: list[dict[int, int]] | None = field(
        default=None, repr=False, compare=False)

    def check(self) -> None:
        assert sum(self.freq.values()) == self.iterations
        for i in range(self.n_players):
            total = sum(self.type_counts.get((i, t), 0)
                        for t in range(self.n_types[i]))
            assert total == self.iterations
        for dist in self.strategies.values():
            assert abs(sum(dist) - 1.0) < 1e-9
            assert all(p >= 0 for p in dist)

    def strategy(self, player: int, type_id: int, infoset: InfoSet,
                 n_actions: int) -> list[float]:
        got = self.strategies.get((player, type_id, infoset))
        if got is None:
            return [1.0 / n_actions] * n_actions
        return got

    def plan_marginal(self, player: int, type_id: int) -> dict[int, float]:
        """Empirical marginal of this (player, type)'s first-stage action."""
        if self._marginals is None:
            n_slots = sum(self.n_types)
            acc: list[dict[int, int]] = [{} for _ in range(n_slots)]
            for plan, count in self.freq.items():
                for slot in range(n_slots):
                    a = plan[slot] if not self.full_plans else plan[slot][0]
                    acc[slot][a] = acc[slot].get(a, 0) + count
            self._marginals = acc
        slot = sum(self.n_types[:player]) + type_id
        m = self.iterations
        return {a: c / m for a, c in self._marginals[slot].items()}

    # -- serialization -------------------------------------------------

    def to_json_dict(self) -> dict:
        """Canonical, deterministic document (timings deliberately omitted)."""

        def iset_key(iset: InfoSet) -> str:
            stage, hist = iset
            return json.dumps([stage, [list(j) for j in hist]])

        def table(d):
            return {
                f"{p},{t}|{iset_key(iset)}": vals
                for (p, t, iset), vals in sorted(d.items())
            }

        return {
            "schema_version": SCHEMA_VERSION,
            "backend": self.backend,
            "n_players": self.n_players,
            "n_types": list(self.n_types),
            "iterations": self.iterations,
            "full_plans": self.full_plans,
            "regrets": table(self.regrets),
            "strategies": table(self.strategies),
            "values": {f"{p},{t}": v for (p, t), v in sorted(self.values.items())},
            "type_counts": {f"{p},{t}": c
                            for (p, t), c in sorted(self.type_counts.items())},
            "freq": {json.dumps(plan): c for plan, c in sorted(self.freq.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=1)


def merge_results(parts: Iterable[SolveResult]) -> SolveResult:
    """Sum the additive tables of sharded solves (multi-worker path)."""
    parts = list(parts)
    base = parts[0]
    out = SolveResult(
        n_players=base.n_players, n_types=base.n_types,
        iterations=0, regrets={}, strategies={}, values={},
        type_counts={}, freq={}, full_plans=base.full_plans,
        backend=base.backend,
    )
    for part in parts:
        out.iterations += part.iterations
        out.duration += part.duration
        for key, vals in part.regrets.items():
            acc = out.regrets.setdefault(key, [0.0] * len(vals))
            for i, v in enumerate(vals):
                acc[i] += v
        for key, v in part.values.items():
            out.values[key] = out.values.get(key, 0.0) + v
        for key, c in part.type_counts.items():
            out.type_counts[key] = out.type_counts.get(key, 0) + c
        for plan, c in part.freq.items():
            out.freq[plan] = out.freq.get(plan, 0) + c
    # strategies from merged positive regrets
    for key, regs in out.regrets.items():
        clipped = [max(r, 0.0) for r in regs]
        total = sum(clipped)
        if total > 0.0:
            out.strategies[key] = [c / total for c in clipped]
        else:
            out.strategies[key] = [1.0 / len(regs)] * len(regs)
    return out

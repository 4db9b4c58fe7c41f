"""Closed-loop traffic simulation.

Each step rebuilds trajectory trees from the current vehicle states,
solves the resulting game once per agent, lets the ego pick its type
from estimated type values while humans keep their ground-truth type,
executes the chosen first-stage branch for one replanning interval, and
updates the common belief from the observed motions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..beliefs import Belief, ObservationModel, update_marginal
from ..games import Prior
from ..policy import choose_plan, estimate_type_values, select_type
from ..solver import SolverConfig, solve
from ..traffic.game import build_traffic_game
from ..traffic.scenarios import Scenario, ScenarioError, VehicleConfig
from ..traffic.trajectories import (TrajectoryTree, VehicleState, build_tree,
                                    build_trajectory_tree)


class SimError(RuntimeError):
    pass


@dataclass(frozen=True)
class AgentConfig:
    player: int
    role: str                    # "ego" | "human"
    mode: str = "bayes"          # "bayes" | "baseline"
    scheme: str = "marginal"     # plan implementation scheme
    true_type: int | None = None


@dataclass
class WorldState:
    xy: np.ndarray
    v_long: float


@dataclass
class StepRecord:
    step: int
    states: list[dict]           # per vehicle, at the start of the step
    chosen_types: list[int]
    plan_actions: list[int]
    plan_labels: list[tuple[float, float]]
    type_values: dict            # ego's estimated value per candidate type
    belief: tuple                # marginals after this step's update
    executed: list[dict]         # per vehicle sampled executed motion
    solve_seconds: list[float]


@dataclass
class SimTrace:
    case: str
    variant: str
    mode: str
    seed: int
    replan_interval: float
    steps: list[StepRecord] = field(default_factory=list)
    collision: bool = False
    min_circle_distance: float = float("inf")
    error: str | None = None


def default_agents(scenario: Scenario, mode: str = "bayes",
                   scheme: str = "marginal") -> list[AgentConfig]:
    """One agent per vehicle; only the ego switches to the baseline mode."""
    agents = []
    for i, v in enumerate(scenario.vehicles):
        agents.append(AgentConfig(
            player=i, role=v.role,
            mode=mode if v.role == "ego" else "bayes",
            scheme=scheme, true_type=v.true_type))
    return agents


def project_state(line, xy, v_long: float) -> VehicleState:
    s, l = line.project(xy)  # noqa: E741
    return VehicleState(station=s, lateral=l, v_long=float(v_long))


def build_trees(scenario: Scenario,
                states: list[WorldState]) -> list[list[TrajectoryTree]]:
    """Per-vehicle, per-type trees at the current world states."""
    trees = []
    for i, vehicle in enumerate(scenario.vehicles):
        per_type = []
        for type_id, intent in enumerate(vehicle.intents):
            line = scenario.lines[intent.ref_line]
            state = project_state(line, states[i].xy, states[i].v_long)
            per_type.append(build_trajectory_tree(
                state, intent, line, scenario.stage_durations, scenario.dt))
        trees.append(per_type)
    return trees


def union_labels(vehicle: VehicleConfig) -> list[tuple[float, float]]:
    """Deduplicated union of the vehicle's action labels across types,
    in order of first appearance."""
    seen = []
    for intent in vehicle.intents:
        for a in range(intent.n_actions):
            label = intent.action_label(a)
            if label not in seen:
                seen.append(label)
    return seen


def build_baseline_trees(scenario: Scenario,
                         states: list[WorldState]) -> list[list[TrajectoryTree]]:
    """Single-type trees over union action spaces, on each vehicle's
    nominal reference line."""
    trees = []
    for i, vehicle in enumerate(scenario.vehicles):
        intent = vehicle.intents[vehicle.nominal_type]
        line = scenario.lines[intent.ref_line]
        state = project_state(line, states[i].xy, states[i].v_long)
        tree = build_tree(state, union_labels(vehicle), line,
                          scenario.stage_durations, scenario.dt)
        trees.append([tree])
    return trees


def make_baseline_game(scenario: Scenario, states: list[WorldState]):
    trees = build_baseline_trees(scenario, states)
    return build_traffic_game(trees, scenario.params), trees


def _floored(dist, floor: float) -> list[float]:
    vals = [max(float(p), floor) for p in dist]
    total = sum(vals)
    return [v / total for v in vals]


def _agent_seed(seed: int, step: int, player: int) -> int:
    return (seed * 1_000_003 + step * 7919 + player * 104_729) & ((1 << 63) - 1)


def _executed_samples(seg, line, n_keep: int) -> dict:
    """World-frame sample arrays of the executed part of a segment."""
    xy = seg.xy[:n_keep + 1]
    return {
        "t": seg.t[:n_keep + 1].tolist(),
        "x": xy[:, 0].tolist(),
        "y": xy[:, 1].tolist(),
        "s": seg.s[:n_keep + 1].tolist(),
        "l": seg.l[:n_keep + 1].tolist(),
        "v_long": seg.v_long[:n_keep + 1].tolist(),
        "v_lat": seg.v_lat[:n_keep + 1].tolist(),
        "a_long": seg.a_long[:n_keep + 1].tolist(),
        "a_lat": seg.a_lat[:n_keep + 1].tolist(),
        "heading": seg.heading[:n_keep + 1].tolist(),
    }


def _circle_min_distance(executed: list[dict], offset: float) -> float:
    """Minimum pairwise circle-center distance over a step's samples."""
    centers = []
    for rec in executed:
        x = np.asarray(rec["x"])
        y = np.asarray(rec["y"])
        h = np.asarray(rec["heading"])
        dx, dy = np.cos(h) * offset, np.sin(h) * offset
        centers.append(np.stack([
            np.column_stack([x + dx, y + dy]),
            np.column_stack([x - dx, y - dy]),
        ]))
    best = float("inf")
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            for bi in range(2):
                for bj in range(2):
                    diff = centers[i][bi] - centers[j][bj]
                    dist = np.hypot(diff[:, 0], diff[:, 1]).min()
                    best = min(best, float(dist))
    return best


def run_closed_loop(scenario: Scenario, agents: list[AgentConfig],
                    solver: SolverConfig, seed: int,
                    steps: int | None = None) -> SimTrace:
    if len(agents) != scenario.n_players:
        raise ScenarioError("need one agent per vehicle")
    steps = scenario.steps if steps is None else steps
    ego = scenario.ego_index()
    mode = agents[ego].mode
    replan = scenario.replan_interval
    n_keep = int(round(replan / scenario.dt))
    params = scenario.params

    states = [WorldState(xy=np.asarray(v.start_xy, dtype=float),
                         v_long=v.start_v) for v in scenario.vehicles]
    belief = Belief.uniform(scenario.n_types)
    if scenario.obs_v_std is None:
        sigma_diag = [scenario.obs_std**2] * 2
    else:
        sigma_diag = [scenario.obs_std**2] * 2 + [scenario.obs_v_std**2]
    model = ObservationModel(sigma=np.diag(sigma_diag), mu=np.asarray)
    trace = SimTrace(case=scenario.case, variant=scenario.variant, mode=mode,
                     seed=seed, replan_interval=replan)

    for step in range(steps):
        trees = build_trees(scenario, states)
        game = build_traffic_game(trees, params)
        prior = Prior(marginals=[
            _floored(belief.of(i), scenario.belief_floor)
            for i in range(scenario.n_players)])
        baseline_game = baseline_trees = None
        if mode == "baseline":
            baseline_game, baseline_trees = make_baseline_game(
                scenario, states)

        results = {}
        durations = []
        for agent in agents:
            cfg = SolverConfig(
                iterations=solver.iterations, eps=solver.eps,
                seed=_agent_seed(seed, step, agent.player),
                workers=solver.workers, backend=solver.backend,
                decode_tables=False)
            if agent.mode == "baseline":
                uniform = Prior(marginals=[[1.0]] * scenario.n_players)
                res = solve(baseline_game, uniform, cfg)
            else:
                res = solve(game, prior, cfg)
            results[agent.player] = res
            durations.append(res.duration)

        chosen_types = []
        plan_actions = []
        plan_labels = []
        type_values: dict = {}
        exec_segments = []
        for agent in agents:
            res = results[agent.player]
            vehicle = scenario.vehicles[agent.player]
            if agent.mode == "baseline":
                type_id = 0
                agent_trees = baseline_trees
            else:
                agent_trees = trees
                if agent.role == "human":
                    type_id = agent.true_type
                else:
                    est = estimate_type_values(res, agent.player)
                    allowed = list(vehicle.selectable)
                    type_id = select_type(est, allowed)
                    type_values = {vehicle.intents[t].name: est.values[t]
                                   for t in allowed}
            choice = choose_plan(res, agent.player, type_id,
                                 scheme=agent.scheme)
            tree = agent_trees[agent.player][type_id]
            chosen_types.append(type_id)
            plan_actions.append(choice.action)
            plan_labels.append(tree.labels[choice.action])
            exec_segments.append(tree.stage1[choice.action])

        start_states = [{"x": float(s.xy[0]), "y": float(s.xy[1]),
                         "v_long": float(s.v_long)} for s in states]
        executed = []
        for agent, seg in zip(agents, exec_segments):
            vehicle = scenario.vehicles[agent.player]
            if agent.mode == "baseline":
                line = scenario.lines[
                    vehicle.intents[vehicle.nominal_type].ref_line]
            else:
                line = scenario.line_of(vehicle, chosen_types[agent.player])
            executed.append(_executed_samples(seg, line, n_keep))
            nxt = seg.state_at(replan)
            xy, _ = line.world([nxt.station], [nxt.lateral])
            states[agent.player] = WorldState(xy=xy[0], v_long=nxt.v_long)

        step_min = _circle_min_distance(executed, params.circle_offset)
        trace.min_circle_distance = min(trace.min_circle_distance, step_min)
        if step_min < 2.0 * params.circle_radius:
            trace.collision = True

        # common belief update from the observed motions; mixture weights
        # come from a bayes-solving agent's recorded plan distribution
        ref = None
        for agent in agents:
            if agent.mode == "bayes":
                ref = results[agent.player]
                break
        if ref is not None:
            with_v = scenario.obs_v_std is not None
            for i in range(scenario.n_players):
                observed = [executed[i]["x"][n_keep],
                            executed[i]["y"][n_keep]]
                if with_v:
                    observed.append(executed[i]["v_long"][n_keep])
                cands_per_type = []
                for t in range(scenario.n_types[i]):
                    marg = ref.plan_marginal(i, t)
                    total = sum(marg.values())
                    cands = []
                    for a, count in sorted(marg.items()):
                        if count == 0:
                            continue
                        seg = trees[i][t].stage1[a]
                        st = seg.state_at(replan)
                        line = scenario.line_of(scenario.vehicles[i], t)
                        xy, _ = line.world([st.station], [st.lateral])
                        point = list(xy[0]) + ([st.v_long] if with_v else [])
                        cands.append((np.asarray(point), count / total))
                    cands_per_type.append(cands)
                belief = update_marginal(belief, i, np.asarray(observed),
                                         cands_per_type, model)

        trace.steps.append(StepRecord(
            step=step, states=start_states, chosen_types=chosen_types,
            plan_actions=plan_actions, plan_labels=plan_labels,
            type_values=type_values, belief=belief.marginals,
            executed=executed, solve_seconds=durations))
        if trace.collision:
            break

    return trace

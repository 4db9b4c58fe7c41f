"""Command-line interface: closed-loop runs, sweeps, benchmarks, verify.

Exit codes: 0 success, 1 configuration error, 2 verification failure,
3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import yaml

from .games import GameError, Prior
from .sim.harness import default_agents, make_baseline_game, run_closed_loop
from .sim.metrics import compute_metrics
from .sim.trace import trace_to_csv, trace_to_json
from .solver import SolverConfig, solve
from .traffic.game import build_traffic_game
from .traffic.scenarios import ScenarioError, list_variants, load_scenario

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_RUNTIME = 3

BENCH_BUDGETS = (10_000, 20_000, 50_000)


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with code 2
        raise ConfigError(message)


def _parse_overrides(pairs: list[str]) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        key, _, raw = pair.partition("=")
        out[key.strip()] = yaml.safe_load(raw)
    return out


def _split_solver_overrides(overrides: dict) -> tuple[dict, dict]:
    """Pull solver-level keys out of a --set mapping."""
    solver = {}
    for key in ("eps",):
        if key in overrides:
            solver[key] = overrides.pop(key)
    return solver, overrides


def _solver_config(args, seed: int, solver_overrides: dict) -> SolverConfig:
    return SolverConfig(iterations=args.iters, seed=seed,
                        workers=args.workers,
                        eps=float(solver_overrides.get("eps", 0.6)))


def _load(args, overrides: dict):
    if args.replan is not None:
        overrides = dict(overrides, replan_interval=args.replan)
    return load_scenario(args.case, args.scenario, overrides or None)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_run(args) -> int:
    solver_over, overrides = _split_solver_overrides(
        _parse_overrides(args.set))
    scenario = _load(args, overrides)
    cfg = _solver_config(args, args.seed, solver_over)
    agents = default_agents(scenario, mode=args.mode)
    trace = run_closed_loop(scenario, agents, cfg, seed=args.seed)
    report = compute_metrics([trace], ego=scenario.ego_index())

    out = Path(args.out)
    _write(out / "trace.json", trace_to_json(trace))
    _write(out / "metrics.json",
           json.dumps(report.to_json_dict(), sort_keys=True, indent=1))
    _write(out / "trace.csv",
           "# schema_version=1\n" + trace_to_csv(trace))
    print(f"case {scenario.case} scenario {scenario.variant} mode "
          f"{args.mode} seed {args.seed}: collision={trace.collision} "
          f"min_distance={trace.min_circle_distance:.2f} -> {out}/")
    return EXIT_OK


def cmd_sweep(args) -> int:
    solver_over, overrides = _split_solver_overrides(
        _parse_overrides(args.set))
    variants = list_variants(args.case)
    if not variants:
        raise ConfigError(f"case {args.case!r} defines no scenarios")
    modes = ["bayes", "baseline"] if args.mode == "both" else [args.mode]

    rows = ["# schema_version=1",
            "mode,scenario,runs,failures,avg_max_a_long,rms_a_long,"
            "avg_max_a_lat,rms_a_lat,avg_min_distance,collision_rate"]
    worst = EXIT_OK
    for mode in modes:
        for variant in variants:
            traces = []
            failures = 0
            for rep in range(args.repeats):
                seed = args.seed + rep
                try:
                    sub = argparse.Namespace(**vars(args))
                    sub.scenario = variant
                    scenario = _load(sub, dict(overrides))
                    cfg = _solver_config(args, seed, solver_over)
                    agents = default_agents(scenario, mode=mode)
                    traces.append(run_closed_loop(scenario, agents, cfg,
                                                  seed=seed))
                except Exception as exc:  # record and continue the sweep
                    failures += 1
                    worst = EXIT_RUNTIME
                    print(f"run failed ({mode} {variant} seed {seed}): "
                          f"{exc}", file=sys.stderr)
            if traces:
                rep_ = compute_metrics(traces, ego=scenario.ego_index())
                rows.append(
                    f"{mode},{variant},{rep_.runs},{failures},"
                    f"{rep_.avg_max_a_long},{rep_.rms_a_long},"
                    f"{rep_.avg_max_a_lat},{rep_.rms_a_lat},"
                    f"{rep_.avg_min_distance},{rep_.collision_rate}")
                print(f"{mode} {variant}: {rep_.runs} runs, "
                      f"collision rate {rep_.collision_rate:.2f}, "
                      f"min distance {rep_.avg_min_distance:.2f}")
            else:
                rows.append(f"{mode},{variant},0,{failures},,,,,,")
    out = Path(args.out)
    _write(out / "sweep.csv", "\n".join(rows) + "\n")
    print(f"wrote {out}/sweep.csv")
    return worst


def _time_solve(game, prior, iterations: int, seed: int,
                backend: str = "auto") -> float:
    cfg = SolverConfig(iterations=iterations, seed=seed, backend=backend,
                       decode_tables=False)
    return solve(game, prior, cfg).duration


def cmd_bench(args) -> int:
    solver_over, overrides = _split_solver_overrides(
        _parse_overrides(args.set))
    del solver_over
    scenario = _load(args, overrides)

    from .sim.harness import WorldState, build_trees
    import numpy as np

    states = [WorldState(xy=np.asarray(v.start_xy, dtype=float),
                         v_long=v.start_v) for v in scenario.vehicles]
    game = build_traffic_game(build_trees(scenario, states),
                              scenario.params)
    prior = Prior(marginals=[[1.0 / n] * n for n in scenario.n_types])
    baseline_game, _ = make_baseline_game(scenario, states)
    uniform = Prior(marginals=[[1.0]] * scenario.n_players)

    rows = ["# schema_version=1", "section,method,iterations,seconds"]
    for budget in BENCH_BUDGETS:
        for method, g, p in (("proposed", game, prior),
                             ("baseline", baseline_game, uniform)):
            secs = _time_solve(g, p, budget, args.seed)
            rows.append(f"traffic,{method},{budget},{secs:.4f}")
            print(f"traffic {method:8s} {budget:6d} iters: {secs:.3f}s")

    # compiled versus pure-Python backend on a small verification game
    from .verify import tiny_bayesian_game
    from .solver import HAVE_COMPILED

    spec, tiny_prior = tiny_bayesian_game()
    backends = ["python"] + (["compiled"] if HAVE_COMPILED else [])
    for budget in BENCH_BUDGETS:
        for backend in backends:
            secs = _time_solve(spec, tiny_prior, budget, args.seed,
                               backend=backend)
            rows.append(f"backend,{backend},{budget},{secs:.4f}")
            print(f"backend {backend:8s} {budget:6d} iters: {secs:.3f}s")

    out = Path(args.out)
    _write(out / "bench.csv", "\n".join(rows) + "\n")
    print(f"wrote {out}/bench.csv")
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verify

    start = time.perf_counter()
    results = verify.run_all(scale=args.scale)
    for check in results:
        print(check.line())
    print(f"total {time.perf_counter() - start:.1f}s")
    failed = [c for c in results if not c.passed and not c.skipped]
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="bayesdrive",
                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario=True):
        p.add_argument("--case", default="I",
                       help="case id (I, II) or a scenario YAML path")
        if scenario:
            p.add_argument("--scenario", default="A",
                           help="scenario variant id")
        p.add_argument("--iters", type=int, default=20_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--replan", type=float, default=None,
                       help="replanning interval override, seconds")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--set", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="override a utility/scenario/solver parameter")

    p_run = sub.add_parser("run", help="one closed-loop scenario run")
    common(p_run)
    p_run.add_argument("--mode", choices=("bayes", "baseline"),
                       default="bayes")
    p_run.set_defaults(fn=cmd_run)

    p_sweep = sub.add_parser("sweep",
                             help="all scenarios of a case, repeated")
    common(p_sweep, scenario=False)
    p_sweep.add_argument("--mode", choices=("bayes", "baseline", "both"),
                         default="both")
    p_sweep.add_argument("--repeats", type=int, default=5)
    p_sweep.set_defaults(fn=cmd_sweep, scenario=None)

    p_bench = sub.add_parser("bench", help="solver timing benchmark")
    common(p_bench)
    p_bench.set_defaults(fn=cmd_bench)

    p_verify = sub.add_parser("verify",
                              help="small-game verification suites")
    p_verify.add_argument("--scale", type=float, default=1.0,
                          help="iteration budget scale factor")
    p_verify.set_defaults(fn=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except (ConfigError, ScenarioError, GameError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        return EXIT_RUNTIME
    except Exception as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

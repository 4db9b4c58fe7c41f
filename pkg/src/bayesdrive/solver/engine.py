"""Solve entry point: backend selection, config, multi-worker sharding."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ..games import GameError, GameSpec, Prior
from . import HAVE_COMPILED
from ._pykernel import solve_python
from .flat import FlatGame, TableUtility, flat_to_spec, flatten_spec, run_compiled
from .tables import SolveResult, merge_results


@dataclass(frozen=True)
class SolverConfig:
    iterations: int = 20_000
    eps: float = 0.6
    seed: int = 0
    workers: int = 1
    record_full_plans: bool = False
    record_samples: bool = False
    # skip decoding per-infoset regret/strategy tables into the result;
    # closed-loop planning only consumes plan frequencies and root values
    decode_tables: bool = True
    backend: str = "auto"  # auto | python | compiled

    def __post_init__(self):
        if self.iterations < 1:
            raise GameError("iterations must be >= 1")
        if not 0.0 < self.eps <= 1.0:
            raise GameError("exploration eps must be in (0, 1]")
        if self.workers < 1:
            raise GameError("workers must be >= 1")


def _pick_backend(game, cfg: SolverConfig) -> str:
    if cfg.backend not in ("auto", "python", "compiled"):
        raise GameError(f"unknown backend {cfg.backend!r}")
    if cfg.record_full_plans or cfg.record_samples:
        # full-plan / per-iteration recording exists only in the Python path
        return "python"
    if cfg.backend == "compiled":
        if not HAVE_COMPILED:
            raise GameError("compiled kernel not available")
        return "compiled"
    if cfg.backend == "python":
        return "python"
    return "compiled" if HAVE_COMPILED else "python"


def _solve_once(game, prior: Prior, cfg: SolverConfig) -> SolveResult:
    backend = _pick_backend(game, cfg)
    if backend == "compiled":
        if isinstance(game, GameSpec):
            try:
                game = flatten_spec(game)
            except ValueError:
                return solve_python(game, prior, cfg.iterations, cfg.eps,
                                    cfg.seed)
        return run_compiled(game, prior, cfg.iterations, cfg.eps, cfg.seed,
                            decode_tables=cfg.decode_tables)
    if isinstance(game, FlatGame):
        game = flat_to_spec(game)
    return solve_python(game, prior, cfg.iterations, cfg.eps, cfg.seed,
                        record_full_plans=cfg.record_full_plans,
                        record_samples=cfg.record_samples)


# job shared with forked pool workers; game specs hold closures that do
# not pickle, so workers inherit it through fork instead
_fork_job = None


def _worker_shard(args):
    size, seed = args
    game, prior, cfg = _fork_job
    return _solve_once(game, prior,
                       replace(cfg, workers=1, iterations=size, seed=seed))


def solve(game: GameSpec | FlatGame, prior: Prior,
          cfg: SolverConfig) -> SolveResult:
    """Run MCCFR-S for ``cfg.iterations`` and return all tables.

    Single worker is exactly sequential and bit-deterministic under a
    fixed seed; multiple workers shard iterations and merge, which is
    reproducible only in distribution.
    """
    n_types = tuple(int(t) for t in
                    (game.n_types if isinstance(game, GameSpec)
                     else game.n_types))
    if prior.n_types != n_types:
        raise GameError("prior support does not match the game's types")
    if cfg.workers == 1:
        return _solve_once(game, prior, cfg)

    import multiprocessing as mp

    shard = cfg.iterations // cfg.workers
    sizes = [shard] * cfg.workers
    sizes[0] += cfg.iterations - shard * cfg.workers
    jobs = [(size, cfg.seed + 0x9E3779B9 * (w + 1))
            for w, size in enumerate(sizes) if size > 0]
    global _fork_job
    _fork_job = (game, prior, cfg)
    ctx = mp.get_context("fork")
    try:
        with ctx.Pool(len(jobs)) as pool:
            parts = pool.map(_worker_shard, jobs)
    finally:
        _fork_job = None
    return merge_results(parts)

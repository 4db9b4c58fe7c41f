"""Bayes-CCE no-regret solver and game-theoretic driving simulator."""

__version__ = "0.1.0"

from .games import GameSpec, Prior  # noqa: F401
from .solver import SolveResult, SolverConfig, solve  # noqa: F401

"""MCCFR-S solver with a compiled fast path and a pure-Python fallback."""

try:
    from . import _ckernel  # noqa: F401
    HAVE_COMPILED = True
except ImportError:
    HAVE_COMPILED = False

from .engine import SolverConfig, solve  # noqa: E402,F401
from .tables import SolveResult  # noqa: E402,F401

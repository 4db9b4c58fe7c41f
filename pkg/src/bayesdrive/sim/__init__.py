from .harness import (AgentConfig, SimTrace, default_agents,
                      make_baseline_game, run_closed_loop)
from .metrics import MetricsReport, compute_metrics
from .trace import trace_to_csv, trace_to_json, trace_to_json_dict

__all__ = [
    "AgentConfig", "SimTrace", "default_agents", "make_baseline_game",
    "run_closed_loop", "MetricsReport", "compute_metrics", "trace_to_csv",
    "trace_to_json", "trace_to_json_dict",
]

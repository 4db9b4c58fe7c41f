"""Trace serialization: canonical JSON and per-vehicle CSV time series.

Canonical JSON intentionally omits wall-clock timings so that repeated
runs with the same seed serialize byte-identically.
"""

from __future__ import annotations

import json

from .harness import SimTrace


def trace_to_json_dict(trace: SimTrace) -> dict:
    steps = []
    for rec in trace.steps:
        steps.append({
            "step": rec.step,
            "states": rec.states,
            "chosen_types": rec.chosen_types,
            "plan_actions": rec.plan_actions,
            "plan_labels": [list(lbl) for lbl in rec.plan_labels],
            "type_values": {k: v for k, v in sorted(rec.type_values.items())},
            "belief": [list(m) for m in rec.belief],
            "executed": rec.executed,
        })
    return {
        "schema_version": 1,
        "case": trace.case,
        "variant": trace.variant,
        "mode": trace.mode,
        "seed": trace.seed,
        "replan_interval": trace.replan_interval,
        "collision": trace.collision,
        "min_circle_distance": trace.min_circle_distance,
        "error": trace.error,
        "steps": steps,
    }


def trace_to_json(trace: SimTrace) -> str:
    return json.dumps(trace_to_json_dict(trace), sort_keys=True,
                      separators=(",", ":"))


def trace_to_csv(trace: SimTrace) -> str:
    """Per-sample time series of every vehicle, one row per (t, player).

    Belief columns hold the common marginal over the row's player types
    as of the step the sample belongs to.
    """
    n_players = len(trace.steps[0].executed) if trace.steps else 0
    max_types = max((len(m) for rec in trace.steps for m in rec.belief),
                    default=0)
    header = ["t", "player", "x", "y", "v_long", "v_lat", "a_long", "a_lat"]
    header += [f"belief_{k}" for k in range(max_types)]
    rows = [",".join(header)]
    t_base = 0.0
    for rec in trace.steps:
        n_samples = len(rec.executed[0]["t"]) if n_players else 0
        for h in range(n_samples):
            for i in range(n_players):
                ex = rec.executed[i]
                vals = [t_base + ex["t"][h], i, ex["x"][h], ex["y"][h],
                        ex["v_long"][h], ex["v_lat"][h], ex["a_long"][h],
                        ex["a_lat"][h]]
                beliefs = list(rec.belief[i])
                beliefs += [""] * (max_types - len(beliefs))
                rows.append(",".join(str(v) for v in vals + beliefs))
        t_base += trace.replan_interval
    return "\n".join(rows) + "\n"

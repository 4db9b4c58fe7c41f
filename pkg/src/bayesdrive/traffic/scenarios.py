"""Scenario files: road geometry, vehicles, intention types and variants.

A scenario file describes one traffic case (reference lines, vehicles
with their candidate intention types, stage durations) plus named
variants that pin each human driver's ground-truth type and optionally
move initial positions.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from .costs import UtilityParams
from .geometry import ReferenceLine, lane_shift_line, straight_line, turn_line
from .trajectories import IntentionSpec


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class VehicleConfig:
    name: str
    role: str                      # "ego" | "human"
    intents: tuple[IntentionSpec, ...]
    start_xy: tuple[float, float]
    start_v: float
    true_type: int | None = None   # humans only
    selectable: tuple[int, ...] = ()   # ego candidate types
    nominal_type: int = 0          # baseline utility evaluation type

    def type_names(self) -> list[str]:
        return [it.name for it in self.intents]


@dataclass(frozen=True)
class Scenario:
    case: str
    variant: str
    lines: dict[str, ReferenceLine]
    vehicles: tuple[VehicleConfig, ...]
    stage_durations: tuple[float, float]
    dt: float
    replan_interval: float
    steps: int
    obs_std: float
    # std of an optional velocity observation channel; None disables it
    # and observations are end positions only
    obs_v_std: float | None = None
    # lower bound applied to belief marginals when forming the solver
    # prior, so every type keeps a sampling share and estimated type
    # values stay defined
    belief_floor: float = 0.02
    params: UtilityParams = field(default_factory=UtilityParams)

    @property
    def n_players(self) -> int:
        return len(self.vehicles)

    @property
    def n_types(self) -> tuple[int, ...]:
        return tuple(len(v.intents) for v in self.vehicles)

    def ego_index(self) -> int:
        for i, v in enumerate(self.vehicles):
            if v.role == "ego":
                return i
        raise ScenarioError("scenario has no ego vehicle")

    def line_of(self, vehicle: VehicleConfig, type_id: int) -> ReferenceLine:
        return self.lines[vehicle.intents[type_id].ref_line]


_LINE_BUILDERS = {
    "straight": lambda s: straight_line(
        tuple(s["start"]), float(s["heading_deg"]), float(s["length"])),
    "lane_shift": lambda s: lane_shift_line(
        float(s["y_from"]), float(s["y_to"]),
        float(s["x_start"]), float(s["x_end"]),
        float(s.get("x_min", 0.0)), float(s.get("x_max", 150.0))),
    "turn": lambda s: turn_line(
        tuple(s["start"]), float(s["heading_deg"]), float(s["approach"]),
        float(s["radius"]), float(s["turn_deg"]), float(s["exit_length"])),
}


def _build_line(spec: dict) -> ReferenceLine:
    kind = spec.get("kind")
    if kind not in _LINE_BUILDERS:
        raise ScenarioError(f"unknown reference line kind {kind!r}")
    return _LINE_BUILDERS[kind](spec)


def _build_vehicle(spec: dict, type_names_seen: dict) -> VehicleConfig:
    intents = []
    for t in spec["types"]:
        intents.append(IntentionSpec(
            name=t["name"], ref_line=t["line"],
            speeds=tuple(float(v) for v in t["speeds"]),
            laterals=tuple(float(v) for v in t.get("laterals", [0.0]))))
    names = [it.name for it in intents]
    if len(set(names)) != len(names):
        raise ScenarioError(f"vehicle {spec['name']}: duplicate type names")
    type_names_seen[spec["name"]] = names
    role = spec.get("role", "human")
    if role not in ("ego", "human"):
        raise ScenarioError(f"vehicle {spec['name']}: unknown role {role!r}")
    selectable = tuple(names.index(n) for n in spec.get("selectable", names))
    nominal = names.index(spec["nominal"]) if "nominal" in spec else 0
    return VehicleConfig(
        name=spec["name"], role=role, intents=tuple(intents),
        start_xy=(float(spec["start"][0]), float(spec["start"][1])),
        start_v=float(spec["start_v"]),
        selectable=selectable, nominal_type=nominal)


# scenario-level scalar settings that accept overrides
_DOC_KEYS = ("dt", "replan_interval", "steps", "obs_std", "obs_v_std",
             "belief_floor")


def parse_scenario(doc: dict, variant: str,
                   overrides: dict | None = None) -> Scenario:
    """Instantiate one variant of a scenario document.

    ``overrides`` may set any :class:`UtilityParams` field or any of the
    scenario-level keys in ``_DOC_KEYS``; unknown keys are rejected.
    """
    if overrides:
        doc = dict(doc)
        param_fields = {f for f in UtilityParams.__dataclass_fields__}
        for key, value in overrides.items():
            if key in _DOC_KEYS:
                doc[key] = value
            elif key not in param_fields:
                raise ScenarioError(f"unknown override key {key!r}")
    variants = doc.get("variants", {})
    if variant not in variants:
        raise ScenarioError(
            f"unknown scenario variant {variant!r}; "
            f"have {sorted(variants)}")
    lines = {name: _build_line(s) for name, s in doc["lines"].items()}
    names_seen: dict = {}
    vehicles = [_build_vehicle(v, names_seen) for v in doc["vehicles"]]

    var = variants[variant] or {}
    true_types = var.get("true_types", {})
    starts = var.get("starts", {})
    out = []
    for v in vehicles:
        if v.name in starts:
            xy = starts[v.name]
            v = replace(v, start_xy=(float(xy[0]), float(xy[1])))
        if v.role == "human":
            if v.name not in true_types:
                raise ScenarioError(
                    f"variant {variant}: no true type for human {v.name}")
            v = replace(v, true_type=names_seen[v.name].index(
                true_types[v.name]))
        for it in v.intents:
            if it.ref_line not in lines:
                raise ScenarioError(
                    f"vehicle {v.name}: unknown reference line {it.ref_line!r}")
        out.append(v)

    params = UtilityParams(**doc.get("utility", {}))
    if overrides:
        params = params.override(**{k: v for k, v in overrides.items()
                                    if hasattr(params, k)})
    durations = tuple(float(x) for x in doc["stage_durations"])
    if len(durations) != 2:
        raise ScenarioError("stage_durations must list two spans")
    return Scenario(
        case=str(doc["case"]), variant=variant, lines=lines,
        vehicles=tuple(out), stage_durations=durations,
        dt=float(doc.get("dt", 0.1)),
        replan_interval=float(doc.get("replan_interval", 0.4)),
        steps=int(doc.get("steps", 8)),
        obs_std=float(doc.get("obs_std", 0.5)),
        obs_v_std=(None if doc.get("obs_v_std") is None
                   else float(doc["obs_v_std"])),
        belief_floor=float(doc.get("belief_floor", 0.02)),
        params=params)


_CASE_FILES = {"I": "case1.yaml", "II": "case2.yaml"}


def load_case_doc(case: str) -> dict:
    """Bundled scenario document for a case id, or a YAML file path."""
    if case in _CASE_FILES:
        res = importlib.resources.files("bayesdrive.traffic").joinpath(
            "data", _CASE_FILES[case])
        text = res.read_text()
    else:
        try:
            with open(case) as fh:
                text = fh.read()
        except OSError as exc:
            raise ScenarioError(
                f"unknown case {case!r} and no such scenario file") from exc
    return yaml.safe_load(text)


def load_scenario(case: str, variant: str,
                  overrides: dict | None = None) -> Scenario:
    return parse_scenario(load_case_doc(case), variant, overrides)


def list_variants(case: str) -> list[str]:
    return sorted(load_case_doc(case).get("variants", {}))


def initial_world_states(scenario: Scenario) -> list[dict]:
    """Per-vehicle world position and speed at t = 0."""
    return [{"xy": np.asarray(v.start_xy, dtype=float), "v": v.start_v}
            for v in scenario.vehicles]

from .costs import UtilityParams
from .game import build_traffic_game
from .geometry import ReferenceLine, lane_shift_line, straight_line, turn_line
from .scenarios import Scenario, load_scenario, list_variants
from .trajectories import (IntentionSpec, TrajectoryTree, VehicleState,
                           build_segment, build_tree, build_trajectory_tree)

__all__ = [
    "UtilityParams", "build_traffic_game", "ReferenceLine",
    "lane_shift_line", "straight_line", "turn_line", "Scenario",
    "load_scenario", "list_variants", "IntentionSpec", "TrajectoryTree",
    "VehicleState", "build_segment", "build_tree", "build_trajectory_tree",
]

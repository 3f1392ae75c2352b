"""Structural diagnostics: influence regions, long-edge census, weight-increasing
paths, hierarchies and their independent verifiers."""
from .census import CensusReport, long_edge_census, slowdown_level
from .hierarchy import HNode, Hierarchy, find_hierarchy, verify_hierarchy_timing
from .influence import ball_of_influence_radius, is_strong_edge, mcd_plate
from .paths import (MECHANISMS, PathResult, PathStep, greedy_weight_path,
                    mcd_alternating_path)
from .verify import alternating_check, verify_hierarchy, verify_path

__all__ = [
    "CensusReport", "long_edge_census", "slowdown_level",
    "HNode", "Hierarchy", "find_hierarchy", "verify_hierarchy_timing",
    "ball_of_influence_radius", "is_strong_edge", "mcd_plate",
    "MECHANISMS", "PathResult", "PathStep", "greedy_weight_path", "mcd_alternating_path",
    "alternating_check", "verify_hierarchy", "verify_path",
]

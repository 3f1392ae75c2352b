"""Geometric inhomogeneous random graphs and push-pull rumour spreading.

Submodules:

* ``geometry``  torus distances, ball volumes and the connection kernel
* ``model``     vertex and edge sampling, components, degree statistics
* ``protocol``  push-pull simulation and the independent-activation process
* ``regimes``   closed-form phase diagram and constants
* ``structure`` census, weight-increasing paths, hierarchies and verifiers
* ``harness``   scaling experiments and growth fits
* ``graphfile`` text serialisation of graphs
"""
from .errors import DataError, ResourceError, UsageError
from .geometry import GeometryKind, connection_prob, dist, torus_coord_dist, volume
from .graphfile import load_graph, save_graph
from .harness import ExperimentConfig, FitReport, fit_growth, run_scaling_experiment
from .model import (Graph, ModelParams, degree_stats, giant_component, sample_edges,
                    sample_graph, sample_vertices)
from .protocol import (RPrimeConfig, SpreadConfig, SpreadTrace, coupled_round, push_pull_round,
                       rprime_round, run_spread)
from .regimes import Regime, RegimeReport, classify

__version__ = "0.1.0"

__all__ = [
    "DataError", "ResourceError", "UsageError",
    "GeometryKind", "connection_prob", "dist", "torus_coord_dist", "volume",
    "load_graph", "save_graph",
    "ExperimentConfig", "FitReport", "fit_growth", "run_scaling_experiment",
    "Graph", "ModelParams", "degree_stats", "giant_component", "sample_edges", "sample_graph",
    "sample_vertices",
    "RPrimeConfig", "SpreadConfig", "SpreadTrace", "coupled_round", "push_pull_round",
    "rprime_round", "run_spread",
    "Regime", "RegimeReport", "classify",
]

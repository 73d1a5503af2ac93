"""Two-step nilpotent metric Lie algebras from graphs, and exact tests for
whether the associated nilmanifold is geodesic orbit or naturally reductive.
"""
__version__ = "0.1.0"

from .classify import ClassificationReport, classify, construct_semi_standard, ideal_decomposition, is_semi_standard
from .graph import Graph, complete_graph, disjoint_union, is_cluster_graph, parse_graph, path_graph
from .linalg import BACKEND
from .metric import Metric, standard_metric
from .nilpotent import build_algebra

__all__ = [
    "BACKEND",
    "ClassificationReport",
    "Graph",
    "Metric",
    "build_algebra",
    "classify",
    "complete_graph",
    "construct_semi_standard",
    "disjoint_union",
    "ideal_decomposition",
    "is_cluster_graph",
    "is_semi_standard",
    "parse_graph",
    "path_graph",
    "standard_metric",
]

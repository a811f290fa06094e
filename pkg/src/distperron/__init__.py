"""Distance matrices of graphs and finite metric spaces: Perron vector bounds,
exact solvability of ``D x = 1`` and the related asymptotic constants."""

from .distance_matrix import DistanceMatrix, graph_distance_matrix, metric_distance_matrix
from .graph_core import (
    Graph,
    gen_broom,
    gen_complete,
    gen_cycle,
    gen_erdos_renyi,
    gen_path,
    gen_star,
    gen_sun,
    is_connected,
    read_graph,
    write_graph,
)
from .metric_space import FiniteMetric, gen_cluster_plus_point, metric_from_points, validate_metric
from .solver import prop1_condition, solve_exact, solve_float
from .spectral import analyze, full_spectrum, perron_eigenpair, rayleigh_quotient, verify_theorem

__version__ = "0.1.0"

__all__ = [
    "DistanceMatrix", "graph_distance_matrix", "metric_distance_matrix",
    "Graph", "gen_broom", "gen_complete", "gen_cycle", "gen_erdos_renyi", "gen_path", "gen_star", "gen_sun",
    "is_connected", "read_graph", "write_graph",
    "FiniteMetric", "gen_cluster_plus_point", "metric_from_points", "validate_metric",
    "prop1_condition", "solve_exact", "solve_float",
    "analyze", "full_spectrum", "perron_eigenpair", "rayleigh_quotient", "verify_theorem",
]

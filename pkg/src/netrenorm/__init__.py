"""Box-covering renormalization toolkit for complex networks.

Box covering and N(l_B) series, supernode collapse flows, fractal vs
small-world classification, degree-correlation scaling, TF-IDF labels for
spatial communities, and spatial-constrained attachment growth models.
"""
from .kernels import BACKEND
from .graph import Graph, build_graph, bfs_distances, diameter, density, knn_profile
from .boxcover import BoxCover, BoxCountSeries, Coverer, box_counts, cover, validate_cover
from .renorm import collapse, correlation_vs_lB, renormalization_flow
from .scaling import (classify_topology, fit_degree_exponent, fit_exponential_curve,
                      fit_power_law_curve, hub_attraction, phase_region)
from .geomodel import GeoModelConfig, Rule, deterministic_fractal, diameter_growth, grow

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Graph", "build_graph", "bfs_distances", "diameter", "density", "knn_profile",
    "BoxCover", "BoxCountSeries", "Coverer", "box_counts", "cover", "validate_cover",
    "collapse", "correlation_vs_lB", "renormalization_flow",
    "classify_topology", "fit_degree_exponent", "fit_exponential_curve", "fit_power_law_curve",
    "hub_attraction", "phase_region",
    "GeoModelConfig", "Rule", "deterministic_fractal", "diameter_growth", "grow",
]

"""Infinity mirror analysis for graph generators.

Fit a generator to a graph, generate, re-fit to the synthetic graph, and repeat;
degeneration is measured per level with graphlet correlation distance and
standard global metrics.
"""

from ._core import (
    FitFailure,
    Graph,
    Model,
    assortativity,
    clustering,
    degree_distribution,
    eigenvector_centrality,
    fit,
    gcd,
    generate,
    hop_plot,
    load_graph,
    orbit_counts,
    parse_edge_list,
    run_chain,
    write_edge_list,
)

__all__ = [
    "FitFailure",
    "Graph",
    "Model",
    "assortativity",
    "clustering",
    "degree_distribution",
    "eigenvector_centrality",
    "fit",
    "gcd",
    "generate",
    "hop_plot",
    "load_graph",
    "orbit_counts",
    "parse_edge_list",
    "run_chain",
    "write_edge_list",
]

"""Percolation with constant freezing (PCF): event-driven simulation on finite
graphs, exact tree formulas, a small-graph Markov-chain oracle and the Monte
Carlo layer used to locate the critical freezing rate on the square lattice."""

__version__ = "0.1.0"

from .engine import (ClockSet, Configuration, RunResult, clocks_from_arrays, run_coupled,
                     run_pcf, run_percolation, run_warm_pcf, sample_clocks,
                     tree_root_cluster, tree_root_clusters)
from .errors import (BracketError, CapacityError, ContractError, DomainError, NumericError,
                     ParameterError, PCFError, SizeError, ValidationError)
from .graph import (GraphTopology, PriorityOrder, build_generic, build_grid,
                    build_rooted_tree, induced_subgraph, load_edge_list, named_graph)

__all__ = [
    "BracketError", "CapacityError", "ClockSet", "Configuration", "ContractError",
    "DomainError", "GraphTopology", "NumericError", "PCFError", "ParameterError",
    "PriorityOrder", "RunResult", "SizeError", "ValidationError", "build_generic",
    "build_grid", "build_rooted_tree", "clocks_from_arrays", "induced_subgraph",
    "load_edge_list", "named_graph", "run_coupled", "run_pcf", "run_percolation",
    "run_warm_pcf", "sample_clocks", "tree_root_cluster", "tree_root_clusters",
]

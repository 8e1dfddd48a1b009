"""Tree graphs of strongly connected digraphs and their determinant factorizations."""

__version__ = "0.1.0"

from .digraph import DiGraph, is_strongly_connected, strongly_connected_subsets
from .errors import GraphError, GuardError, TGError, VerificationError
from .exploration import explore, multiplicity_table
from .factorization import (Analysis, verify_adjacency_factorization, verify_all,
                            verify_main_theorem, verify_polbiane, verify_spanning_ratio)
from .multiedge import MultiDiGraph, subdivide, transfer_trees
from .spanning import SpanningTree, enumerate_spanning_trees
from .treegraph import TreeGraph, build_tree_graph

__all__ = [
    "Analysis", "DiGraph", "GraphError", "GuardError", "MultiDiGraph", "SpanningTree",
    "TGError", "TreeGraph", "VerificationError", "build_tree_graph", "enumerate_spanning_trees",
    "explore", "is_strongly_connected", "multiplicity_table", "strongly_connected_subsets",
    "subdivide", "transfer_trees", "verify_adjacency_factorization", "verify_all",
    "verify_main_theorem", "verify_polbiane", "verify_spanning_ratio",
]

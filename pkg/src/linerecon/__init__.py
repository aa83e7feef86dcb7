"""Exact reconstruction of point sets on the line from partial distances."""
from ._accel import backend
from .graph_core import EmbeddedGraph, Graph, MultiGraph, read_instance, write_instance
from .reconstruct import (BudgetExceeded, enumerate_realizations, extract_witness,
                          is_pair_reconstructible, maximal_reconstructible_subsets,
                          validate_witness)
from .rigidity import construct_flex_embedding, find_rigidity_certificate, is_nac_coloring

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "EmbeddedGraph", "Graph", "MultiGraph", "backend",
    "construct_flex_embedding", "enumerate_realizations", "extract_witness",
    "find_rigidity_certificate", "is_nac_coloring", "is_pair_reconstructible",
    "maximal_reconstructible_subsets", "read_instance", "validate_witness", "write_instance",
]

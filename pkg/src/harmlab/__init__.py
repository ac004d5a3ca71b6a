"""Discrete harmonic functions on periodic planar graphs."""

__version__ = "0.1.0"

from .gallery import build_crossing_lattice, harmonic_gallery, z3_box_example
from .graph import (
    FiniteGraph,
    GraphSpecError,
    PeriodicGraph,
    dump_graph_spec,
    instantiate_region,
    load_graph_spec,
    quotient,
    validate_embedding,
)
from .harmonic import ScalarField, SolverConfig, effective_conductance, is_harmonic, laplacian_apply, solve_dirichlet
from .lattices import honeycomb_lattice, square_lattice, triangular_lattice
from .levelset import alpha_bound, extract_lemma_instance, partition_signs, run_counting, verify_hypotheses
from .topology import boundary_faces, dual_graph, enumerate_faces, outer_contour, planar_map, reduce_to_simple_dual

__all__ = [
    "FiniteGraph",
    "GraphSpecError",
    "PeriodicGraph",
    "ScalarField",
    "SolverConfig",
    "alpha_bound",
    "boundary_faces",
    "build_crossing_lattice",
    "dual_graph",
    "dump_graph_spec",
    "effective_conductance",
    "enumerate_faces",
    "extract_lemma_instance",
    "harmonic_gallery",
    "honeycomb_lattice",
    "instantiate_region",
    "is_harmonic",
    "laplacian_apply",
    "load_graph_spec",
    "outer_contour",
    "partition_signs",
    "planar_map",
    "quotient",
    "reduce_to_simple_dual",
    "run_counting",
    "solve_dirichlet",
    "square_lattice",
    "triangular_lattice",
    "validate_embedding",
    "verify_hypotheses",
    "z3_box_example",
]

"""Exact decision procedures for strongly graded groupoids and their algebras."""

__version__ = "0.1.0"

from .criteria import condition_y, strongly_z_graded, strongly_zmod_graded
from .graph import Edge, Graph, Path, Ray, classify_vertices, cycle_vertices, paths_into, shift
from .semilinear import SemilinearSet, length_spectrum

__all__ = [
    "Edge", "Graph", "Path", "Ray", "SemilinearSet", "classify_vertices", "condition_y",
    "cycle_vertices", "length_spectrum", "paths_into", "shift", "strongly_z_graded",
    "strongly_zmod_graded",
]

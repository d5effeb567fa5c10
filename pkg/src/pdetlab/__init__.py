"""Exact pseudodeterminants, cellular spanning trees and self-dual cell balls."""

from .complex import EMPTY, CellComplex, Subcomplex, reduced_homology, validate
from .families import diminished_trapezohedron, polygon, pyramid, simplex, simplex_skeleton, single_vertex
from .linalg import IntMatrix, charpoly_signed, charpoly_unsigned, pdet, smith_normal_form
from .polynomial import MultiPoly, UniPoly, complement_transform
from .selfdual import SelfDualStructure, alexander_dual, validate_self_dual
from .trees import enumerate_trees, tau, tau_via_pdet_chain, tau_weighted

__all__ = [
    "EMPTY",
    "CellComplex",
    "Subcomplex",
    "IntMatrix",
    "MultiPoly",
    "UniPoly",
    "SelfDualStructure",
    "alexander_dual",
    "charpoly_signed",
    "charpoly_unsigned",
    "complement_transform",
    "diminished_trapezohedron",
    "enumerate_trees",
    "pdet",
    "polygon",
    "pyramid",
    "reduced_homology",
    "simplex",
    "simplex_skeleton",
    "single_vertex",
    "smith_normal_form",
    "tau",
    "tau_via_pdet_chain",
    "tau_weighted",
    "validate",
    "validate_self_dual",
]

__version__ = "0.1.0"

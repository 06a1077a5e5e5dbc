"""Codensity-based simplification of filtered simplicial complexes."""

from .errors import FeasibilityError, InputError
from .complex import FilteredComplex, Morphism, ValidationReport, is_isomorphic, restrict, size_of, validate
from .codensity import codensity_matrix, codensity_of
from .interleaving import dgh_exact, dif_exact, dif_strong
from .persistence import barcodes, bottleneck
from .simplify import core, greedy_simplify
from .transforms import clique_completion, tail_transform, vietoris_rips

__version__ = "0.1.0"

__all__ = [
    "FeasibilityError",
    "FilteredComplex",
    "InputError",
    "Morphism",
    "ValidationReport",
    "barcodes",
    "bottleneck",
    "clique_completion",
    "codensity_matrix",
    "codensity_of",
    "core",
    "dgh_exact",
    "dif_exact",
    "dif_strong",
    "greedy_simplify",
    "is_isomorphic",
    "restrict",
    "size_of",
    "tail_transform",
    "validate",
    "vietoris_rips",
]

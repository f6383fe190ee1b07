"""Three-dimensional realization: balls, tubes, vertex tori and linked chain tori."""

from .build import Ball3, Scaffold, ScaffoldParams, Tube3, build_scaffold
from .export import export_json, export_obj, import_json, scaffold_from_json, scaffold_to_json
from .geometry import TorusPlacement, circle, gauss_linking
from .patterns import PatternAssignment, assign_patterns, pattern_of
from .validate import linking_census, validate_containment, validate_disjointness, validate_linking

__all__ = [
    "Ball3",
    "PatternAssignment",
    "Scaffold",
    "ScaffoldParams",
    "TorusPlacement",
    "Tube3",
    "assign_patterns",
    "build_scaffold",
    "circle",
    "export_json",
    "export_obj",
    "gauss_linking",
    "import_json",
    "linking_census",
    "pattern_of",
    "scaffold_from_json",
    "scaffold_to_json",
    "validate_containment",
    "validate_disjointness",
    "validate_linking",
]

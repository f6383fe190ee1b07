"""Free-group Cayley graphs, Antoine necklace trees and 3-D scaffolds of linked tori."""

from .antoine import (
    LEAF,
    AntoineTree,
    first_mismatch,
    random_tree_pool,
    rigid_family,
    sher_equivalent,
    sher_equivalent_bruteforce,
    stage_union_index,
    standard_chain_tree,
)
from .cayley import (
    TruncatedCayleyGraph,
    automorphism_action,
    build_graph,
    check_label_coherence,
)
from .errors import CayleyCantorError
from .labels import EdgeCantor, VertexCantor, canonical_label, label_equivalent
from .words import ReducedWord, enumerate_words, invert, multiply, reduce, word_count

__version__ = "0.1.0"

__all__ = [
    "LEAF",
    "AntoineTree",
    "CayleyCantorError",
    "EdgeCantor",
    "ReducedWord",
    "TruncatedCayleyGraph",
    "VertexCantor",
    "automorphism_action",
    "build_graph",
    "canonical_label",
    "check_label_coherence",
    "enumerate_words",
    "first_mismatch",
    "invert",
    "label_equivalent",
    "multiply",
    "random_tree_pool",
    "reduce",
    "rigid_family",
    "sher_equivalent",
    "sher_equivalent_bruteforce",
    "stage_union_index",
    "standard_chain_tree",
    "word_count",
]

"""Free superalgebra F<Y u Z>: arithmetic, commutators, text syntax, families."""

from .families import (
    PRESETS,
    FamilyMember,
    OrderedQCommutator,
    SpanningFamily,
    UnknownPreset,
    enumerate_ordered_q_commutators,
    enumerate_spanning_family,
    ordered_q_commutator_descriptors,
)
from .grammar import ParseError, format_poly, parse_poly
from .poly import (
    GradedPolynomial,
    ParityError,
    Variable,
    Word,
    commutator,
    format_word,
    grading_split,
    left_normed,
    parity,
    powered_commutator,
    random_polynomial,
    substitute,
    word_key,
    y,
    z,
)

__all__ = [
    "PRESETS", "FamilyMember", "GradedPolynomial", "OrderedQCommutator", "ParityError", "ParseError",
    "SpanningFamily", "UnknownPreset", "Variable", "Word", "commutator", "enumerate_ordered_q_commutators",
    "enumerate_spanning_family", "format_poly", "format_word", "grading_split", "left_normed",
    "ordered_q_commutator_descriptors", "parity", "parse_poly", "powered_commutator", "random_polynomial",
    "substitute",
    "word_key", "y", "z",
]

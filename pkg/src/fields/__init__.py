"""
Control families as evaluable vector fields, Lie brackets, seminorms and
rank tests.
"""

from .brackets import (
    FieldHandle,
    Word,
    ad_chain,
    bracket_field,
    enumerate_words,
    field_for,
    lie_bracket,
    word_length,
)
from .families import ControlFamily, FamilyKind, eval_generator
from .rank import evaluation_rank
from .seminorm import seminorm
from .symbolic import (
    SymbolicField,
    ambient_gradient,
    coordinate_field,
    coordinate_symbols,
    euler_field,
    gradient_extension,
    hamiltonian_extension,
)

__all__ = [
    "FieldHandle",
    "Word",
    "ad_chain",
    "bracket_field",
    "enumerate_words",
    "field_for",
    "lie_bracket",
    "word_length",
    "ControlFamily",
    "FamilyKind",
    "eval_generator",
    "evaluation_rank",
    "seminorm",
    "SymbolicField",
    "ambient_gradient",
    "coordinate_field",
    "coordinate_symbols",
    "euler_field",
    "gradient_extension",
    "hamiltonian_extension",
]

"""Exact toolkit for complete toric varieties given by fans."""

from .exactla import IntMatrix, SmithDecomposition, smith_normal_form, kernel_basis, cokernel_invariants
from .fan import Fan, Cone, FanError, validate_fan
from .morphism import ToricMorphism

__all__ = [
    "IntMatrix",
    "SmithDecomposition",
    "smith_normal_form",
    "kernel_basis",
    "cokernel_invariants",
    "Fan",
    "Cone",
    "FanError",
    "validate_fan",
    "ToricMorphism",
]

"""Exact symbolic verification of q-integer curvature on quantum projective space."""

from .kernel import IMPLEMENTATION, ResourceLimitError
from .ncalg import NCPoly, Presentation, build_presentation, degree, qdet, star, z, zbar
from .qscalar import ScalarRat, qbinomial, qfactorial, qint_bracket, qint_round

__version__ = "0.1.0"

__all__ = [
    "IMPLEMENTATION", "ResourceLimitError", "NCPoly", "Presentation", "build_presentation",
    "degree", "qdet", "star", "z", "zbar", "ScalarRat", "qbinomial", "qfactorial",
    "qint_bracket", "qint_round",
]

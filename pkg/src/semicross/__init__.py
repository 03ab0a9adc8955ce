"""Operator norms and C*-envelope structure of semicrossed products over finite systems."""

__version__ = "0.1.0"

from .algebra import LEFT, RIGHT, MatPoly, Poly, ell1_norm, mul, sharp, sharp_mat
from .dynsys import (FiniteSystem, SubsetMask, TailSystem, add_tail, direct_limit,
                     is_minimal, orbit_data, radical_support)
from .envelope import (EnvelopeDescriptor, IdealWitness, corner_consistency_check,
                       envelope_of, fourier_invariant_ideals, minimality_report,
                       simplicity_report)
from .errors import SemicrossError
from .norms import (CrossedElement, NormResult, fejer_sum, matrix_norm, semicrossed_norm,
                    shift_norm, symbol_norm)
from .reps import KINDS

__all__ = [
    "CrossedElement", "EnvelopeDescriptor", "FiniteSystem", "IdealWitness", "KINDS", "LEFT",
    "MatPoly", "NormResult", "Poly", "RIGHT", "SemicrossError", "SubsetMask", "TailSystem",
    "add_tail", "corner_consistency_check", "direct_limit", "ell1_norm", "envelope_of",
    "fejer_sum", "fourier_invariant_ideals", "is_minimal", "matrix_norm", "minimality_report",
    "mul", "orbit_data", "radical_support", "semicrossed_norm", "sharp", "sharp_mat",
    "shift_norm", "simplicity_report", "symbol_norm",
]

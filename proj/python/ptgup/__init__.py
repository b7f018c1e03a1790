"""2D oscillator with imaginary xy coupling.

Exact spectrum, PT phase classification, first-order minimal-length
corrections, and a dense-basis diagonalization oracle.
"""

from ._core import (
    DerivedModes,
    DomainError,
    ModelParams,
    classify_phase,
    delta_energy,
    derive_modes,
    energy,
    evaluate_wavefunction,
    h_int_matrix_element,
    mixing_coefficients,
    oracle_spectrum,
    verify,
)

__all__ = [
    "DerivedModes",
    "DomainError",
    "ModelParams",
    "classify_phase",
    "delta_energy",
    "derive_modes",
    "energy",
    "evaluate_wavefunction",
    "h_int_matrix_element",
    "mixing_coefficients",
    "oracle_spectrum",
    "verify",
]

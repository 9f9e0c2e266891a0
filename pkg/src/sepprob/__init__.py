"""Separability probabilities of two-qubit systems over the real, complex and quaternionic numbers.

The package has four parts:

``sepprob.series``
    Certified evaluation of the series P(alpha), its derivatives and its
    exact rational values on the half-integer grid.
``sepprob.states``
    Hilbert-Schmidt sampling of 4x4 density matrices, partial transposes,
    ordinary and Moore determinants, and the Monte Carlo estimators.
``sepprob.recon``
    Legendre-series reconstruction of the determinant density from its
    power moments, and the separable mass it implies.
``sepprob.cli``
    The ``sepprob`` command-line program.
"""

from .recon import LegendreReconstruction, MomentSequence, legendre_coefficients, separability_from_moments
from .series import BoundedReal, GridAlpha, SeriesEvaluation, grid_table, p_derivative, p_eval, telescoping_check
from .states import DivisionAlgebra, McEstimate, mc_moments, mc_separability, run_mc

__version__ = "0.1.0"

__all__ = [
    "BoundedReal",
    "DivisionAlgebra",
    "GridAlpha",
    "LegendreReconstruction",
    "McEstimate",
    "MomentSequence",
    "SeriesEvaluation",
    "grid_table",
    "legendre_coefficients",
    "mc_moments",
    "mc_separability",
    "p_derivative",
    "p_eval",
    "run_mc",
    "separability_from_moments",
    "telescoping_check",
]

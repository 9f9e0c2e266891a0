"""Hilbert-Schmidt random states over R, C and H and their PPT statistics."""

from .algebra import DivisionAlgebra
from .density import (
    DensityMatrix,
    NotSelfAdjoint,
    PairingError,
    bell_state,
    det_selfadjoint,
    is_separable,
    maximally_mixed,
    moore_det,
    partial_transpose,
    product_state,
    pt_determinant,
    sample_hs,
    sample_hs_batch,
)
from .montecarlo import (
    CHUNK,
    McEstimate,
    McRun,
    MomentEstimates,
    SpectrumViolation,
    mc_moments,
    mc_separability,
    moments_csv,
    run_mc,
)
from .quaternion import Quaternion, complex_adjoint

__all__ = [
    "CHUNK",
    "DensityMatrix",
    "DivisionAlgebra",
    "McEstimate",
    "McRun",
    "MomentEstimates",
    "NotSelfAdjoint",
    "PairingError",
    "Quaternion",
    "SpectrumViolation",
    "bell_state",
    "complex_adjoint",
    "det_selfadjoint",
    "is_separable",
    "maximally_mixed",
    "mc_moments",
    "mc_separability",
    "moments_csv",
    "moore_det",
    "partial_transpose",
    "product_state",
    "pt_determinant",
    "run_mc",
    "sample_hs",
    "sample_hs_batch",
]

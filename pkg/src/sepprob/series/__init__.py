"""Certified evaluation of the separability probability series."""

from .gammas import GammaPole
from .sums import (
    GridRow,
    RemovablePoleDerivative,
    TelescopingResult,
    grid_table,
    identify_rational,
    p_derivative,
    p_eval,
    simplest_rational,
    telescoping_check,
    truncated_sum,
    working_precision,
)
from .terms import (
    LIMIT_RATIO,
    NonRemovableSingularity,
    TailCertificationError,
    certified_ray_start,
    q_poly,
    ratio_cap_certified,
    term_f_exact,
    term_f_real,
    term_ratio,
)
from .types import BoundedReal, GridAlpha, SeriesEvaluation, to_fraction

__all__ = [
    "BoundedReal",
    "GammaPole",
    "GridAlpha",
    "GridRow",
    "LIMIT_RATIO",
    "NonRemovableSingularity",
    "RemovablePoleDerivative",
    "SeriesEvaluation",
    "TailCertificationError",
    "TelescopingResult",
    "certified_ray_start",
    "grid_table",
    "identify_rational",
    "p_derivative",
    "p_eval",
    "q_poly",
    "ratio_cap_certified",
    "simplest_rational",
    "telescoping_check",
    "truncated_sum",
    "term_f_exact",
    "term_f_real",
    "term_ratio",
    "to_fraction",
    "working_precision",
]

"""Coherent states of the PT-symmetric Scarf I potential, with numerical checks."""

from .coherent import (
    CoefficientSequence,
    GKStateSpec,
    MinimalStateSpec,
    energy_expectation,
    evaluate_state,
    evolve,
    gk_coefficients,
    gk_normalization_closed,
    gk_normalization_series,
    gk_overlap,
    minimal_coefficients,
    minimal_overlap,
)
from .model import MODEL_A, MODEL_B, ScarfIModel, eigenfunction
from .quadrature import QuadratureError, QuadratureResult, integrate_finite, integrate_halfline
from .verify import VerificationReport, run_checks

__version__ = "0.1.0"

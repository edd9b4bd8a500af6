"""Hypergeometric period and regulator functions with exact operator algebra."""

from .errors import (
    CoefficientBlowupError,
    DegenerateParameterError,
    DomainError,
    FitError,
    HGError,
    HypothesisError,
    IntegrationError,
    NonConvergenceError,
    P1Error,
    PoleError,
)
from .params import HGParams
from .thetadata import ThetaData, derive_ab

__version__ = "0.1.0"

__all__ = [
    "HGParams",
    "ThetaData",
    "derive_ab",
    "HGError",
    "PoleError",
    "DomainError",
    "NonConvergenceError",
    "HypothesisError",
    "DegenerateParameterError",
    "P1Error",
    "CoefficientBlowupError",
    "IntegrationError",
    "FitError",
]
